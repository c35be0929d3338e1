use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use dwork_zeta::deformation::{assemble_p, block_factors, dwork_family, residual_quadratic};
use dwork_zeta::diagonal::{cubic_swap_zeta, diagonal_fermat_zeta};
use dwork_zeta::dwork::{gamma_p_at, gamma_p_rational};
use dwork_zeta::fredholm::zeta_direct;
use dwork_zeta::oracle::{count_projective, count_torus, ff_build, inclusion_exclusion};
use dwork_zeta::padic::{self, PadicRing};
use dwork_zeta::poly::Polynomial;
use dwork_zeta::zeta::{big_json, numerator_newton_polygon, verify_report, ZetaData};
use dwork_zeta::{selftest, ZetaError};

#[derive(Parser)]
#[command(name = "dwork-zeta", version, about = "Zeta functions of hypersurfaces over F_p")]
struct Cli {
    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count projective points of f = 0 over F_{p^s} by enumeration.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Zeta function of a smooth projective hypersurface by the direct trace method.
    ZetaDirect {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        precision: u32,
        #[arg(long)]
        nvars: Option<usize>,
        /// Number of counts N_1..N_S to compute.
        #[arg(long)]
        counts: Option<u32>,
    },
    /// Diagonal hypersurface x1^d + ... + xn^d via gamma values (p = 1 mod d),
    /// or the swap route for a1 x1^3 + a2 x2^3 + a3 x3^3 (p = 2 mod 3).
    ZetaDiagonal {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        d: u32,
        #[arg(long)]
        precision: Option<u32>,
        /// Cubic coefficients a1,a2,a3 for the swap route.
        #[arg(long, value_delimiter = ',')]
        swap: Option<Vec<u64>>,
        /// Also compare the predicted N_2 with an oracle count.
        #[arg(long)]
        check_n2: bool,
    },
    /// The quartic family sum x_i^4 - 4 gamma x1x2x3x4, p = 1 mod 4.
    ZetaDwork4 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        gamma: u64,
        /// Use this N_1 instead of counting.
        #[arg(long)]
        n1: Option<u64>,
        #[arg(long)]
        skip_n2: bool,
    },
    /// Teichmuller lift of a mod p^precision.
    Teich {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        precision: u32,
        #[arg(long)]
        a: u64,
    },
    /// Morita gamma function at a p-integral rational.
    Gamma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        precision: u32,
        /// A rational such as 1/4 or -3.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value_t = GammaMethod::Both)]
        method: GammaMethod,
    },
    /// p-adic Newton polygon of an integer polynomial.
    NewtonPolygon {
        #[arg(long)]
        p: u64,
        /// Coefficients, constant term first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<BigInt>,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GammaMethod {
    Roberts,
    Morita,
    Both,
}

enum Failure {
    Usage(String),
    Validation(String),
}

impl From<ZetaError> for Failure {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::InvalidArgument(_)
            | ZetaError::InvalidPrime(_)
            | ZetaError::Parse(_)
            | ZetaError::Unsupported(_)
            | ZetaError::Singular(_) => Failure::Usage(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, String, bool), Failure>;

fn report_zeta(z: &ZetaData, mut extra: serde_json::Map<String, Value>, mut text: String) -> Outcome {
    let rep = verify_report(z)?;
    let ok = rep.all_ok();
    extra.insert("verify".into(), serde_json::to_value(&rep).expect("serializable"));
    extra.insert("ok".into(), json!(ok));
    let v = z.to_json(Value::Object(extra));
    text.push_str(&format!(
        "numerator{} = {}\ndenominator = {}\nweil {} functional-equation {} newton-symmetric {}\n",
        if z.numerator_is_inverted { " (inverted)" } else { "" },
        poly_text(&z.numerator),
        poly_text(&z.denominator()),
        rep.weil_ok,
        rep.functional_equation_ok,
        rep.newton_symmetric
    ));
    for (s, c) in &z.counts {
        text.push_str(&format!("N_{s} = {c}\n"));
    }
    Ok((v, text, ok))
}

fn poly_text(c: &[BigInt]) -> String {
    let mut out = String::new();
    for (k, a) in c.iter().enumerate() {
        if a == &BigInt::from(0) {
            continue;
        }
        let sign = if a < &BigInt::from(0) { "-" } else { "+" };
        let mag = a.magnitude();
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        match k {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if mag != &1u32.into() {
                    out.push_str(&mag.to_string());
                }
                out.push('T');
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || Failure::Usage(format!("cannot parse rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Count { p, s, poly, nvars } => {
            let f = Polynomial::parse(&poly, p, nvars)?;
            let t = ff_build(p, s)?;
            let n = count_projective(&f, &t)?;
            let torus = count_torus(&f, &t)?;
            let (lhs, rhs) = inclusion_exclusion(&f, &t)?;
            let ok = lhs as i128 == rhs;
            let v = json!({"p": p, "s": s, "q": t.q(), "nvars": f.nvars(), "projective_count": n,
                "torus_count": torus, "strata_check": ok});
            Ok((v, format!("N_{s} = {n}\ntorus count = {torus}\nstrata check {ok}\n"), ok))
        }
        Cmd::ZetaDirect { p, poly, precision, nvars, counts } => {
            let f = Polynomial::parse(&poly, p, nvars)?;
            let run = zeta_direct(&f, precision, counts)?;
            let mut extra = serde_json::Map::new();
            extra.insert("dim".into(), json!(run.dim));
            extra.insert("truncation".into(), json!(run.truncation));
            extra.insert("nnz".into(), json!(run.nnz));
            extra.insert("stability_violations".into(), json!(run.stability_violations));
            extra.insert("valuation_violations".into(), json!(run.valuation_violations));
            let text = format!("basis dimension {} (M = {}), {} nonzero entries\n", run.dim, run.truncation, run.nnz);
            let (v, t, ok) = report_zeta(&run.zeta, extra, text)?;
            Ok((v, t, ok && run.stability_violations == 0 && run.valuation_violations == 0))
        }
        Cmd::ZetaDiagonal { p, n, d, precision, swap, check_n2 } => {
            let (z, f) = match swap {
                Some(a) => {
                    let a: [u64; 3] =
                        a.try_into().map_err(|_| Failure::Usage("--swap takes exactly three coefficients".into()))?;
                    let f = Polynomial::new(p, 3, (0..3).map(|i| {
                        let mut e = vec![0u32; 3];
                        e[i] = 3;
                        (e, a[i] as i64)
                    }))?;
                    (cubic_swap_zeta(p, a, precision)?, f)
                }
                None => {
                    let f = Polynomial::new(p, n, (0..n).map(|i| {
                        let mut e = vec![0u32; n];
                        e[i] = d;
                        (e, 1)
                    }))?;
                    (diagonal_fermat_zeta(n, d, p, precision)?, f)
                }
            };
            let mut extra = serde_json::Map::new();
            let mut n2_ok = true;
            let mut text = String::new();
            if check_n2 {
                let oracle = count_projective(&f, &ff_build(p, 2)?)?;
                let pred = z.predicted_count(2);
                n2_ok = pred == BigInt::from(oracle);
                extra.insert("n2_check".into(), json!({"predicted": big_json(&pred), "oracle": oracle, "ok": n2_ok}));
                text.push_str(&format!("N_2 predicted {pred}, oracle {oracle}\n"));
            }
            let (v, t, ok) = report_zeta(&z, extra, text)?;
            Ok((v, t, ok && n2_ok))
        }
        Cmd::ZetaDwork4 { p, gamma, n1, skip_n2 } => {
            let z = assemble_p(p, gamma, n1)?;
            let mut bf = block_factors(p, gamma)?;
            let n1 = z.counts[0].1.to_u64().expect("count fits u64");
            let a = residual_quadratic(&bf, n1)?;
            bf.residual = Some(a);
            let mut extra = serde_json::Map::new();
            extra.insert("block_factors".into(), serde_json::to_value(&bf).expect("serializable"));
            extra.insert("residual_a".into(), json!(a));
            let mut n2_ok = true;
            let mut text = format!(
                "u5 root {} (x{}), pairs {:?}, root19 {}, residual a = {a}\n",
                bf.u5_root, bf.u5_multiplicity, bf.pair_roots, bf.root19
            );
            if !skip_n2 {
                let oracle = count_projective(&dwork_family(p, gamma)?, &ff_build(p, 2)?)?;
                let pred = z.predicted_count(2);
                n2_ok = pred == BigInt::from(oracle);
                extra.insert("n2_check".into(), json!({"predicted": big_json(&pred), "oracle": oracle, "ok": n2_ok}));
                text.push_str(&format!("N_2 predicted {pred}, oracle {oracle}\n"));
            }
            let (mut v, t, ok) = report_zeta(&z, extra, text)?;
            v["reciprocal_roots"] = v["checks"]["verify"]["reciprocal_roots"].clone();
            v["residual_a"] = json!(a);
            Ok((v, t, ok && n2_ok))
        }
        Cmd::Teich { p, precision, a } => {
            let ring = PadicRing::new(p, precision)?;
            let t = padic::teichmuller(&ring, a);
            let v = json!({"p": p, "precision": precision, "a": a, "value": big_json(&BigInt::from(t.residue().clone()))});
            Ok((v, format!("{}\n", t.residue()), true))
        }
        Cmd::Gamma { p, precision, z, method } => {
            let ring = PadicRing::new(p, precision)?;
            let zr = parse_rational(&z)?;
            let roberts = match method {
                GammaMethod::Morita => None,
                _ => Some(gamma_p_rational(&ring, &zr)?),
            };
            let morita = match method {
                GammaMethod::Roberts => None,
                _ => Some(gamma_p_at(&padic::from_rational(&ring, &zr)?)?),
            };
            let agree = match (&roberts, &morita) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            };
            let show = |x: &Option<dwork_zeta::padic::PadicInt>| x.as_ref().map(|x| big_json(&BigInt::from(x.residue().clone())));
            let v = json!({"p": p, "precision": precision, "z": zr.to_string(),
                "roberts": show(&roberts), "morita": show(&morita), "agree": agree});
            let mut text = String::new();
            if let Some(r) = &roberts {
                text.push_str(&format!("roberts {}\n", r.residue()));
            }
            if let Some(m) = &morita {
                text.push_str(&format!("morita  {}\n", m.residue()));
            }
            Ok((v, text, agree))
        }
        Cmd::NewtonPolygon { p, coeffs } => {
            PadicRing::new(p, 1)?;
            let np = numerator_newton_polygon(p, &coeffs)?;
            let slopes: Vec<String> = np.slope_multiset().iter().map(|s| s.to_string()).collect();
            let segs: Vec<Value> = np.segments.iter().map(|(s, l)| json!([s.to_string(), l])).collect();
            let verts: Vec<Value> = np.vertices.iter().map(|(x, y)| json!([x, y.to_string()])).collect();
            let v = json!({"p": p, "vertices": verts, "segments": segs, "slopes": slopes});
            Ok((v, format!("slopes {}\n", slopes.join(" ")), true))
        }
        Cmd::Selftest { only } => {
            let ids: Vec<u8> = only.unwrap_or_else(|| selftest::CRITERIA.iter().map(|c| c.0).collect());
            let mut text = String::new();
            let mut results = Vec::new();
            for id in ids {
                let o = selftest::run(id);
                eprintln!("{o}");
                text.push_str(&format!("{o}\n"));
                results.push(o);
            }
            let ok = results.iter().all(|o| o.passed);
            let passed = results.iter().filter(|o| o.passed).count();
            text.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
            Ok((json!({"criteria": results, "ok": ok}), text, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let quiet_text = matches!(cli.cmd, Cmd::Selftest { .. });
    match run(cli.cmd) {
        Ok((v, text, ok)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else if quiet_text {
                print!("{}", text.lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
            } else {
                print!("{text}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("validation failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
