//! Command-line front end: exact p-adic modular form operators, the U_p
//! matrix pillar, L-values, and the selftest matrix, all over the plain-text
//! QEXP/NHOC formats on standard streams.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use padicmf::error::Error;
use padicmf::io::{parse_nhoc, parse_qexp, write_qexp};
use padicmf::lfun::{
    ordinary_project, rankin_value, triple_product_value, up_matrix, PrecisionPlan, TwistRoute,
};
use padicmf::mahler::{finite_difference_coeffs, nu_exponent, rho_bruteforce, LocAnChar};
use padicmf::nearly::oc_projection;
use padicmf::padic::PadicCtx;
use padicmf::qexp::{
    cusp_eigenforms, dim_mk, eis_family_specialize, eisenstein, p_stabilize, EigenformData,
    RootChoice,
};

#[derive(Parser)]
#[command(name = "padicmf", about = "exact p-adic modular form calculator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RootArg {
    Unit,
    Nonunit,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Cusp,
    Eis,
}

#[derive(Subcommand)]
enum Command {
    /// Mahler coefficients of a sampled function: emits "k a_k" lines
    Mahler {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u32,
        /// file of residues f(0), f(1), ... one per line
        #[arg(long)]
        samples: String,
    },
    /// Norm-exponent table: emits "m=<m> nu=<nu> rho_check=<nu>" lines
    NuTable {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// theta = q d/dq on a QEXP stream
    Theta,
    /// p-depletion on a QEXP stream
    Deplete,
    /// chi-twisted connection power on a QEXP stream
    NablaChi {
        /// tame exponent i mod (p-1)
        #[arg(long)]
        tame: u64,
        /// wild exponent residue s
        #[arg(long)]
        wild: u64,
    },
    /// U_p on a QEXP stream
    Up,
    /// p-stabilize an eigenform QEXP
    Stabilize {
        #[arg(long, value_enum)]
        root: RootArg,
    },
    /// classical Eisenstein series E_k
    Eis {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u32,
        #[arg(long)]
        qprec: usize,
        #[arg(long)]
        k: u64,
    },
    /// depleted Eisenstein family member at integer weight k2
    EisFamily {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u32,
        #[arg(long)]
        qprec: usize,
        #[arg(long)]
        k2: u64,
        /// conductor N | p-1
        #[arg(long, default_value_t = 1)]
        conductor: u64,
    },
    /// U matrix on the Katz basis: emits the matrix and char series
    UpMatrix {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        qprec: usize,
        #[arg(long)]
        prec: u32,
    },
    /// ordinary projection of a QEXP stream through the Katz-basis model
    OrdinaryProject {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        qprec: usize,
    },
    /// overconvergent projection of an NHOC stream
    OcProject,
    /// triple product p-adic L-value at an unbalanced classical point
    TripleValue {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        l: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        burn_in: u32,
        #[arg(long, value_enum, default_value = "cusp")]
        f_source: SourceArg,
        /// a_2-sorted eigenform branch index for f
        #[arg(long, default_value_t = 0)]
        branch: usize,
    },
    /// Rankin-Selberg p-adic L-value lambda_f(e_ord(theta^t E_{k2}^{[p]} h))
    RankinValue {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k1: i64,
        #[arg(long)]
        k2: u64,
        #[arg(long)]
        k3: i64,
        #[arg(long, default_value_t = 8)]
        prec: u32,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        burn_in: u32,
        #[arg(long, value_enum, default_value = "eis")]
        f_source: SourceArg,
        #[arg(long, default_value_t = 0)]
        branch: usize,
    },
    /// run the invariant suites; prints a pass/fail matrix
    Selftest {
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        fast: bool,
    },
}

fn exit_class(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted(_)
        | Error::QPrecisionExhausted(_)
        | Error::TailNotCertified(_) => 2,
        Error::NotPRegular
        | Error::NotUnbalanced
        | Error::MultiplicityNotOne
        | Error::NoUnitRoot
        | Error::NotOrdinary
        | Error::NoOrdinaryBlock
        | Error::PoleAtWeight(_) => 3,
        _ => 1,
    }
}

fn read_stdin() -> Result<String, Error> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Error::BadInput(format!("stdin: {e}")))?;
    Ok(buf)
}

fn eigen_source(
    ctx: &PadicCtx,
    k: i64,
    source: SourceArg,
    branch: usize,
    qprec: usize,
    root: RootChoice,
) -> Result<EigenformData, Error> {
    match source {
        SourceArg::Eis => {
            if k < 4 {
                return Err(Error::BadInput("Eisenstein source needs k >= 4".into()));
            }
            EigenformData::from_eigenform(&eisenstein(k as u64, ctx, qprec)?, root)
        }
        SourceArg::Cusp => {
            let forms = cusp_eigenforms(k, ctx, qprec)?;
            let f = forms.get(branch).ok_or_else(|| {
                Error::BadInput(format!(
                    "branch {branch} out of range: {} cuspidal eigenforms at weight {k}",
                    forms.len()
                ))
            })?;
            EigenformData::from_eigenform(f, root)
        }
    }
}

/// Pick the first cuspidal branch at a weight, preferring the unit-root
/// stabilization when the form is ordinary.
fn cusp_branch(ctx: &PadicCtx, k: i64, qprec: usize) -> Result<EigenformData, Error> {
    if dim_mk(k) < 2 {
        return Err(Error::BadInput(format!("no cusp forms at weight {k}")));
    }
    let forms = cusp_eigenforms(k, ctx, qprec)?;
    let f = forms
        .first()
        .ok_or_else(|| Error::BadInput(format!("no split eigenform at weight {k}")))?;
    EigenformData::from_eigenform(f, RootChoice::Unit)
        .or_else(|_| EigenformData::from_eigenform(f, RootChoice::NonUnit))
}

fn run() -> Result<(), Error> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are not failures; flag mistakes exit 1
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            e.print().ok();
            std::process::exit(if is_help { 0 } else { 1 });
        }
    };
    match cli.command {
        Command::Mahler { p, prec, samples } => {
            let ctx = PadicCtx::new(p, prec)?;
            let text = std::fs::read_to_string(&samples)
                .map_err(|e| Error::BadInput(format!("{samples}: {e}")))?;
            let mut vals = Vec::new();
            for line in text.lines() {
                let t = line.trim();
                if t.is_empty() {
                    continue;
                }
                let v: u64 = t.parse().map_err(|e| Error::Parse(format!("sample {t}: {e}")))?;
                vals.push(ctx.from_u64(v));
            }
            if vals.is_empty() {
                return Err(Error::BadInput("no samples".into()));
            }
            let f = finite_difference_coeffs(&vals, ctx);
            for (k, a) in f.coeffs.iter().enumerate() {
                println!("{k} {}", a.residue());
            }
        }
        Command::NuTable { p, n } => {
            PadicCtx::new(p, 1)?;
            if n == 0 || n > 12 {
                return Err(Error::BadInput("need 1 <= n <= 12".into()));
            }
            for m in 1..=n {
                println!(
                    "m={m} nu={} rho_check={}",
                    nu_exponent(n, m, p),
                    rho_bruteforce(n, m, p)
                );
            }
        }
        Command::Theta => {
            let f = parse_qexp(&read_stdin()?)?;
            print!("{}", write_qexp(&f.theta()));
        }
        Command::Deplete => {
            let f = parse_qexp(&read_stdin()?)?;
            print!("{}", write_qexp(&f.deplete()));
        }
        Command::NablaChi { tame, wild } => {
            let f = parse_qexp(&read_stdin()?)?;
            let ctx = f.ctx();
            let chi = LocAnChar::new(tame, ctx.from_u64(wild));
            print!("{}", write_qexp(&f.nabla_chi(&chi)));
        }
        Command::Up => {
            let f = parse_qexp(&read_stdin()?)?;
            print!("{}", write_qexp(&f.up()?));
        }
        Command::Stabilize { root } => {
            let f = parse_qexp(&read_stdin()?)?;
            let choice = match root {
                RootArg::Unit => RootChoice::Unit,
                RootArg::Nonunit => RootChoice::NonUnit,
            };
            let st = p_stabilize(&f, choice)?;
            println!(
                "alpha={} alpha_val={} beta_val={}",
                st.roots.alpha.coeff.residue(),
                st.roots.alpha.valuation(),
                st.roots.beta.valuation()
            );
            print!("{}", write_qexp(&st.form));
        }
        Command::Eis { p, prec, qprec, k } => {
            let ctx = PadicCtx::new(p, prec)?;
            print!("{}", write_qexp(&eisenstein(k, &ctx, qprec)?));
        }
        Command::EisFamily { p, prec, qprec, k2, conductor } => {
            let ctx = PadicCtx::new(p, prec)?;
            let e = eis_family_specialize(k2, conductor, &ctx, qprec)?;
            if e.series.is_zero() {
                println!("zero_eisenstein=1");
            }
            print!("{}", write_qexp(&e));
        }
        Command::UpMatrix { p, k, dim, qprec, prec } => {
            let ctx = PadicCtx::new(p, prec)?;
            let data = up_matrix(&ctx, k, dim, qprec)?;
            println!("p={p} k={k} dim={dim} qprec={qprec} prec={prec}");
            println!("certified={}", data.certified);
            for i in 0..dim {
                let row: Vec<String> =
                    (0..dim).map(|j| data.matrix[(i, j)].residue().to_string()).collect();
                println!("row {i}: {}", row.join(" "));
            }
            let cs: Vec<String> =
                data.char_series.iter().map(|c| c.residue().to_string()).collect();
            println!("char_series: {}", cs.join(" "));
        }
        Command::OrdinaryProject { dim, qprec } => {
            let f = parse_qexp(&read_stdin()?)?;
            let Some(k) = f.weight else {
                return Err(Error::BadInput("ordinary projection needs a weight tag".into()));
            };
            let data = up_matrix(&f.ctx(), k, dim, qprec)?;
            print!("{}", write_qexp(&ordinary_project(&data, &f)?));
        }
        Command::OcProject => {
            let f = parse_nhoc(&read_stdin()?)?;
            print!("{}", write_qexp(&oc_projection(&f)?));
        }
        Command::TripleValue { p, k, l, m, prec, dim, burn_in, f_source, branch } => {
            let ctx = PadicCtx::new(p, prec)?;
            let plan = PrecisionPlan { dim, burn_in, basis_qprec: p as usize * (dim + 6) };
            let qin = plan.input_qprec(p).max(4 * dim);
            let f = eigen_source(&ctx, k, f_source, branch, qin, RootChoice::Unit)?;
            let g = cusp_branch(&ctx, l, qin)?;
            let h = cusp_branch(&ctx, m, qin)?;
            let (value, fac) = triple_product_value(&f, &g, &h, &plan, TwistRoute::ThetaDeplete)?;
            let (value_b, _) = triple_product_value(&f, &g, &h, &plan, TwistRoute::NablaChi)?;
            println!("t={}", fac.t);
            println!("c={}", fac.c);
            println!("euler_e={}", fac.e.residue());
            println!("euler_e0={}", fac.e0.residue());
            println!("euler_e1={}", fac.e1.residue());
            println!("value={}", value.residue());
            println!("value_route_b={}", value_b.residue());
            println!("certified_digits={}", value.prec().min(value_b.prec()));
        }
        Command::RankinValue { p, k1, k2, k3, prec, dim, burn_in, f_source, branch } => {
            let ctx = PadicCtx::new(p, prec)?;
            let plan = PrecisionPlan { dim, burn_in, basis_qprec: p as usize * (dim + 6) };
            let qin = plan.input_qprec(p).max(4 * dim);
            let f = eigen_source(&ctx, k1, f_source, branch, qin, RootChoice::Unit)?;
            let h = cusp_branch(&ctx, k3, qin)?;
            let a = rankin_value(&f, k2, &h, &plan, TwistRoute::ThetaDeplete)?;
            let b = rankin_value(&f, k2, &h, &plan, TwistRoute::NablaChi)?;
            println!("t={}", a.t);
            println!("zero_eisenstein={}", u8::from(a.zero_eisenstein));
            println!("value={}", a.value.residue());
            println!("value_route_b={}", b.value.residue());
            println!("certified_digits={}", a.value.prec().min(b.value.prec()));
        }
        Command::Selftest { module, fast } => {
            let results = padicmf::selftest::run_selftest(module.as_deref(), fast);
            if results.is_empty() {
                return Err(Error::BadInput(format!(
                    "no checks match module filter; modules: {}",
                    padicmf::selftest::modules().join(", ")
                )));
            }
            let mut all_ok = true;
            for r in &results {
                println!(
                    "module={} check={} status={} time_ms={}{}",
                    r.module,
                    r.name,
                    if r.ok { "PASS" } else { "FAIL" },
                    r.ms,
                    if r.detail.is_empty() {
                        String::new()
                    } else {
                        format!(" detail={}", r.detail)
                    }
                );
                all_ok &= r.ok;
            }
            if !all_ok {
                return Err(Error::BadInput("selftest failures".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_class(&e))
        }
    }
}
