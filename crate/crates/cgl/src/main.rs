use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use cgl::cauchon::{self, FlattenResult};
use cgl::cgl_verify::{self, Status};
use cgl::intmat;
use cgl::pbw::Exp;
use cgl::presentation::{self, Presentation};
use cgl::prime_seq;
use cgl::quantum_torus;
use cgl::report::Report;
use cgl::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Certify the axioms and the symmetric condition
    Check,
    /// Compute and verify the sequence of homogeneous prime elements
    Primes,
    /// Embed the generators into the quantum torus
    Torus,
    /// Run the deleting-derivations procedure
    Cauchon,
    /// Verify the relationship between the two quantum tori
    Rel,
    /// Report the maximal diagonal torus as an integer lattice
    Hmax,
    /// Decompose a monomial exponent against the prime levels
    Basis,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Primes => "primes",
            Command::Torus => "torus",
            Command::Cauchon => "cauchon",
            Command::Rel => "rel",
            Command::Hmax => "hmax",
            Command::Basis => "basis",
        }
    }
}

/// Exact certification toolkit for iterated skew polynomial extensions.
#[derive(Parser, Debug)]
#[command(name = "cgl", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// A file path, or `catalog:NAME` with optional `?r=..` / `?N=..`
    source: String,
    /// Emit the structured JSON report instead of human-readable text
    #[arg(long)]
    json: bool,
    /// Seed echoed into the report for reproducibility bookkeeping
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the nilpotence search bound
    #[arg(long)]
    bound: Option<u32>,
    /// For `cauchon`: run the reversed presentation inside the quantum torus
    #[arg(long)]
    reversed: bool,
    /// For `basis`: comma-separated exponent vector, e.g. `2,1,0`
    #[arg(long)]
    exponent: Option<String>,
}

fn resolve_source(spec: &str) -> Result<Presentation, Error> {
    if let Some(rest) = spec.strip_prefix("catalog:") {
        let (base, query) = match rest.split_once('?') {
            Some((b, q)) => (b, Some(q)),
            None => (rest, None),
        };
        let mut name = base.to_string();
        if let Some(q) = query {
            for pair in q.split('&') {
                let (key, value) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Usage(format!("bad query parameter {:?}", pair)))?;
                match key {
                    "r" | "N" => name = format!("{}({})", base, value),
                    _ => return Err(Error::Usage(format!("unknown query parameter {:?}", key))),
                }
            }
        }
        presentation::catalog(&name)
    } else {
        let text = std::fs::read_to_string(spec)?;
        presentation::parse_presentation(&text)
    }
}

fn scalar_row(row: &[cgl::scalars::MonomialScalar]) -> Value {
    Value::Array(row.iter().map(|s| Value::from(s.to_string())).collect())
}

fn bigint_mat(m: &[Vec<BigInt>]) -> Value {
    Value::Array(
        m.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::from(x.to_string())).collect()))
            .collect(),
    )
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let mut p = resolve_source(&cli.source)?;
    if let Some(b) = cli.bound {
        p.explicit_bound = Some(b);
    }
    let mut report = Report::new(&cli.source, cli.command.name());
    report.set_data("seed", Value::from(cli.seed));
    report.set_data("digest", Value::from(p.digest()));

    let cert = cgl_verify::verify_cgl(&p);
    match (&cert.status, cli.command) {
        (Status::Cgl, _) => {}
        (_, Command::Check) => {}
        (Status::NotCgl(msg), _) | (Status::Unverified(msg), _) => {
            report.verdict_detail("cgl_certified", false, msg.clone());
            return Ok(report);
        }
    }

    match cli.command {
        Command::Check => {
            match &cert.status {
                Status::Cgl => report.verdict("cgl_certified", true),
                Status::NotCgl(m) => report.verdict_detail("cgl_certified", false, m.clone()),
                Status::Unverified(m) => {
                    report.verdict_detail("cgl_certified", false, format!("unverified: {}", m))
                }
            }
            let sym = cgl_verify::verify_symmetric(&p);
            report.set_data("symmetric", Value::from(sym.symmetric));
            if let Some(reason) = &sym.reason {
                report.set_data("symmetric_reason", Value::from(reason.clone()));
            }
            report.set_data("nilpotence_bound", Value::from(cert.bound));
            let nil: Vec<Value> = cert
                .nilpotency
                .iter()
                .map(|row| Value::Array(row.iter().map(|m| json!(m)).collect()))
                .collect();
            report.set_data("nilpotency_indices", Value::Array(nil));
            let witnesses: Vec<Value> = cert
                .witnesses
                .iter()
                .map(|w| match w {
                    Some(w) => json!({
                        "psi": w.psi.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                        "eigenvalue": w.eigenvalue.to_string(),
                        "supplied": w.supplied,
                    }),
                    None => Value::Null,
                })
                .collect();
            report.set_data("witnesses", Value::Array(witnesses));
        }
        Command::Primes => {
            let seq = prime_seq::compute_prime_sequence(&p, &cert)?;
            for c in prime_seq::verify_prime_sequence(&p, &seq, &cert.lattice)? {
                report.verdict(&c.name, c.pass);
            }
            let y: Vec<Value> = seq.y.iter().map(|v| Value::from(v.to_string())).collect();
            report.set_data("y", Value::Array(y));
            report.set_data("rank", Value::from(seq.rank));
            report.set_data("mu", json!(seq.mu.iter().map(|&m| m + 1).collect::<Vec<_>>()));
            report.set_data("p", json!(seq.p.iter().map(|o| o.map(|v| v + 1)).collect::<Vec<_>>()));
            report.set_data("s", json!(seq.s.iter().map(|o| o.map(|v| v + 1)).collect::<Vec<_>>()));
            report.set_data("kbar", json!(seq.kbar.iter().map(|e| e.0.clone()).collect::<Vec<_>>()));
            report.set_data("q_matrix", Value::Array(seq.qmat.iter().map(|r| scalar_row(r)).collect()));
            report.set_data("alpha", Value::Array(seq.alpha.iter().map(|r| scalar_row(r)).collect()));
        }
        Command::Torus => {
            let seq = prime_seq::compute_prime_sequence(&p, &cert)?;
            let images = quantum_torus::embed_x_to_y(&seq)?;
            for c in quantum_torus::verify_embedding(&p, &seq, &images)? {
                report.verdict(&c.name, c.pass);
            }
            let imgs: Vec<Value> = images.iter().map(|v| Value::from(v.to_string())).collect();
            report.set_data("images", Value::Array(imgs));
        }
        Command::Cauchon => {
            if cli.reversed {
                let seq = prime_seq::compute_prime_sequence(&p, &cert)?;
                let xbar = cauchon::run_reversed_in_torus(&p, &seq)?;
                report.verdict("reversed_run_completed", true);
                let vals: Vec<Value> = xbar.iter().map(|v| Value::from(v.to_string())).collect();
                report.set_data("xbar_prime", Value::Array(vals));
            } else {
                let run = cauchon::run_deleting_derivations(&p, &cert)?;
                let levels: Vec<Value> = run
                    .per_level
                    .iter()
                    .map(|(l, exprs)| {
                        json!({
                            "level": l,
                            "exprs": exprs.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                report.set_data("per_level", Value::Array(levels));
                match &run.flattened {
                    FlattenResult::Full(xbar) => {
                        report.verdict("flattened_fully", true);
                        let vals: Vec<Value> =
                            xbar.iter().map(|v| Value::from(v.to_string())).collect();
                        report.set_data("xbar", Value::Array(vals));
                    }
                    FlattenResult::Partial { level, exprs } => {
                        report.verdict_detail(
                            "flattened_fully",
                            false,
                            format!("partial flatten stopped at level {}", level),
                        );
                        let vals: Vec<Value> =
                            exprs.iter().map(|v| Value::from(v.to_string())).collect();
                        report.set_data("partial_exprs", Value::Array(vals));
                    }
                }
            }
        }
        Command::Rel => {
            let seq = prime_seq::compute_prime_sequence(&p, &cert)?;
            for c in cauchon::verify_theorem_rel(&p, &seq, &cert.lattice)? {
                report.verdict(&c.name, c.pass);
            }
        }
        Command::Hmax => {
            let seq = prime_seq::compute_prime_sequence(&p, &cert)?;
            let l = &cert.lattice;
            let smith = intmat::smith(&l.rows);
            report.verdict("hmax_rank_matches_rank", l.hmax_rank() == seq.rank);
            report.set_data("lattice_rows", bigint_mat(&l.rows));
            report.set_data(
                "smith_diagonal",
                json!(smith.d.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            );
            report.set_data("saturation", bigint_mat(&l.saturation));
            report.set_data("hmax_rank", Value::from(l.hmax_rank()));
            report.set_data("cocharacter_basis", bigint_mat(&l.cocharacter_basis()));
        }
        Command::Basis => {
            let text = cli
                .exponent
                .as_deref()
                .ok_or_else(|| Error::Usage("basis requires --exponent a,b,c,...".into()))?;
            let parts: Result<Vec<i64>, _> =
                text.split(',').map(|s| s.trim().parse::<i64>()).collect();
            let f = Exp(parts.map_err(|_| Error::Usage(format!("bad exponent vector {:?}", text)))?);
            if f.0.len() != p.n {
                return Err(Error::Usage(format!(
                    "exponent vector has length {}, expected {}",
                    f.0.len(),
                    p.n
                )));
            }
            let seq = prime_seq::compute_prime_sequence(&p, &cert)?;
            let (g, c) = quantum_torus::decompose_exponent(&f, &seq);
            let recomposed = (0..p.n)
                .all(|k| BigInt::from(f.0[k]) == BigInt::from(g.0[k]) + &c[seq.mu[k]]);
            report.verdict("decomposition_recomposes", recomposed);
            report.verdict("g_in_delta_set", quantum_torus::in_delta_set(&g, &seq));
            report.set_data("f", json!(f.0));
            report.set_data("g", json!(g.0));
            report.set_data("c", json!(c.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
        }
    }
    Ok(report)
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_human());
            }
            std::process::exit(if report.all_pass() { 0 } else { 1 });
        }
        Err(e) => {
            let code = match &e {
                Error::Io(_)
                | Error::Json(_)
                | Error::Syntax { .. }
                | Error::Schema(_)
                | Error::UnknownName(_)
                | Error::Usage(_) => 2,
                _ => 1,
            };
            eprintln!("error: {}", e);
            std::process::exit(code);
        }
    }
}
