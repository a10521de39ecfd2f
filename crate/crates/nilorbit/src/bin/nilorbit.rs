//! Command-line front end: load an algebra (catalog name or JSON file),
//! run constructions, and emit text or JSON reports.

use std::process::exit;

use clap::{Parser, Subcommand};
use serde_json::json;

use nilorbit::group::{polar_decompose, multiply, GroupElement, LinearForm};
use nilorbit::kirillov::{
    is_polarized, kirillov_lemma, orbit_canonical_form, radical, same_orbit, vergne_polarization,
};
use nilorbit::nilpotent::{catalog, from_json, AlgebraError, LieAlgebra, CATALOG_NAMES};
use nilorbit::ratlin::{format_rat, parse_rat, Mat, Rat, Subspace};
use nilorbit::symmetric::{
    distinguish, galois_model, Involution, SymmetricPair,
};
use nilorbit::finfield::{classify_finite, full_check, reduce_rat, OracleOptions};
use nilorbit::finfield::modp::is_square_mod;

#[derive(Parser)]
#[command(name = "nilorbit", version, about = "Exact orbit-method computations on nilpotent Lie algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an algebra and, optionally, an involution on it
    Check {
        /// Catalog name or path to an algebra JSON file
        algebra: String,
        /// Involution matrix, rows slash-separated: "-1,0,0/0,1,0/0,0,-1"
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Vergne polarization at a linear form
    Polarize {
        algebra: String,
        /// Linear form coordinates in the dual basis, e.g. "0,0,1"
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// Build the polarization along an involution-stable flag
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Adapted frame (X, Y, Z, W) for an algebra with one-dimensional center
    Frame {
        algebra: String,
        #[arg(long)]
        json: bool,
    },
    /// Canonical form of a coadjoint orbit, or a same-orbit test
    Orbit {
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// Second form: test whether it lies on the orbit of --phi
        #[arg(long, allow_hyphen_values = true)]
        phi2: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Polar decomposition u = u⁺·u⁻ of a group element
    Polar {
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// Group element as logarithm coordinates, e.g. "1,2,1/2"
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long)]
        json: bool,
    },
    /// Distinction report for a form: fixed representative, stable polarization, witness
    Distinguish {
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long)]
        json: bool,
    },
    /// Classify distinguished orbits (rational canonical representative, or counts mod p)
    Classify {
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// "rational" (needs --phi) or "finite" (needs --p)
        #[arg(long, default_value = "rational")]
        mode: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Restriction-of-scalars model over F(√eps), with its conjugation
    Galois {
        algebra: String,
        /// Non-square scalar defining the quadratic extension, e.g. "-1" or "2/3"
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        /// Also verify eps stays a non-square mod p
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Full finite-field verification suite at a prime
    Oracle {
        algebra: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        /// Force exhaustive subalgebra/character enumeration on or off
        #[arg(long)]
        exhaustive: Option<bool>,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

fn parse_err(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

// ---------------------------------------------------------------- input

fn rat_of(s: &str) -> Result<Rat, Failure> {
    parse_rat(s.trim()).ok_or_else(|| parse_err(format!("bad rational literal {:?}", s)))
}

fn vec_of(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',').map(rat_of).collect()
}

fn sigma_of(s: &str, dim: usize) -> Result<Mat, Failure> {
    let rows: Vec<Vec<Rat>> = s.split('/').map(vec_of).collect::<Result<_, _>>()?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(parse_err(format!("sigma must be a {dim}x{dim} matrix")));
    }
    Ok(Mat::from_rows(rows))
}

/// A catalog name if one matches, otherwise a file path.
fn load_algebra(source: &str) -> Result<(LieAlgebra, Option<Mat>), Failure> {
    if CATALOG_NAMES.contains(&source) {
        let alg = catalog(source).map_err(|e| invalid(e.to_string()))?;
        return Ok((alg, None));
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| parse_err(format!("cannot read {}: {}", source, e)))?;
    from_json(&text).map_err(|e| match e {
        AlgebraError::BadInput(m) => parse_err(format!("{}: {}", source, m)),
        other => invalid(format!("{}: {}", source, other)),
    })
}

fn load_with_sigma(
    source: &str,
    flag: Option<&str>,
) -> Result<(LieAlgebra, Option<Involution>), Failure> {
    let (alg, file_sigma) = load_algebra(source)?;
    let mat = match flag {
        Some(s) => Some(sigma_of(s, alg.dim)?),
        None => file_sigma,
    };
    let inv = match mat {
        None => None,
        Some(m) => Some(Involution::new(&alg, m).map_err(|e| invalid(e.to_string()))?),
    };
    Ok((alg, inv))
}

fn require_sigma(spec: &str, flag: &str) -> Result<(LieAlgebra, Involution), Failure> {
    let (alg, inv) = load_with_sigma(spec, Some(flag))?;
    Ok((alg, inv.expect("sigma flag was provided")))
}

// ---------------------------------------------------------------- output

fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(format_rat).collect();
    format!("[{}]", parts.join(","))
}

fn json_vec(v: &[Rat]) -> serde_json::Value {
    json!(v.iter().map(format_rat).collect::<Vec<_>>())
}

fn json_basis(s: &Subspace) -> serde_json::Value {
    json!(s.basis_vectors().iter().map(|r| json_vec(r)).collect::<Vec<_>>())
}

fn print_basis(indent: &str, s: &Subspace) {
    for row in s.basis_vectors() {
        println!("{}{}", indent, fmt_vec(&row));
    }
}

fn emit(as_json: bool, value: serde_json::Value, text: impl FnOnce()) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
    } else {
        text();
    }
}

// ---------------------------------------------------------------- commands

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.cmd {
        Cmd::Check { algebra, sigma, json } => {
            let (alg, inv) = load_with_sigma(&algebra, sigma.as_deref())?;
            let center = alg.center();
            let mut report = json!({
                "dim": alg.dim,
                "class": alg.class,
                "center_dim": center.dim(),
                "valid": true,
            });
            let pair = inv.map(|i| SymmetricPair::new(&alg, i));
            if let Some(p) = &pair {
                report["sigma"] = json!({
                    "fixed_dim": p.fixed.dim(),
                    "anti_dim": p.anti.dim(),
                    "fixed_basis": json_basis(&p.fixed),
                    "anti_basis": json_basis(&p.anti),
                });
            }
            emit(json, report, || {
                println!("valid: dim {}, nilpotency class {}", alg.dim, alg.class);
                println!("center dim: {}", center.dim());
                if let Some(p) = &pair {
                    println!("involution: valid");
                    println!("fixed subalgebra (dim {}):", p.fixed.dim());
                    print_basis("  ", &p.fixed);
                    println!("anti subspace (dim {}):", p.anti.dim());
                    print_basis("  ", &p.anti);
                }
            });
            Ok(0)
        }

        Cmd::Polarize { algebra, phi, sigma, json } => {
            let (alg, inv) = load_with_sigma(&algebra, sigma.as_deref())?;
            let phi = LinearForm::new(form_of(&phi, alg.dim)?);
            let flag = alg.jordan_holder_flag(inv.as_ref());
            let pol = vergne_polarization(&alg, &phi, &flag);
            let polarized = is_polarized(&alg, &phi, &pol.space)
                .map_err(|e| invalid(e.to_string()))?;
            let rad = radical(&alg, &phi);
            emit(json, json!({
                "phi": json_vec(&phi.coords),
                "polarization_dim": pol.space.dim(),
                "radical_dim": rad.dim(),
                "is_polarized": polarized,
                "basis": json_basis(&pol.space),
            }), || {
                println!("radical dim: {}", rad.dim());
                println!("polarization (dim {}, polarized: {}):", pol.space.dim(), polarized);
                print_basis("  ", &pol.space);
            });
            Ok(0)
        }

        Cmd::Frame { algebra, json } => {
            let (alg, _) = load_algebra(&algebra)?;
            let frame = kirillov_lemma(&alg).map_err(|e| invalid(e.to_string()))?;
            emit(json, json!({
                "x": json_vec(&frame.x),
                "y": json_vec(&frame.y),
                "z": json_vec(&frame.z),
                "w_basis": json_basis(&frame.w),
            }), || {
                println!("X = {}", fmt_vec(&frame.x));
                println!("Y = {}", fmt_vec(&frame.y));
                println!("Z = {}", fmt_vec(&frame.z));
                println!("W (dim {}):", frame.w.dim());
                print_basis("  ", &frame.w);
            });
            Ok(0)
        }

        Cmd::Orbit { algebra, phi, phi2, json } => {
            let (alg, _) = load_algebra(&algebra)?;
            let phi = LinearForm::new(form_of(&phi, alg.dim)?);
            match phi2 {
                None => {
                    let (canon, witness) = orbit_canonical_form(&alg, &phi);
                    emit(json, json!({
                        "phi": json_vec(&phi.coords),
                        "canonical": json_vec(&canon.coords),
                        "witness": json_vec(&witness.coords),
                    }), || {
                        println!("canonical form: {}", fmt_vec(&canon.coords));
                        println!("witness: {}", fmt_vec(&witness.coords));
                    });
                    Ok(0)
                }
                Some(other) => {
                    let phi2 = LinearForm::new(form_of(&other, alg.dim)?);
                    let witness = same_orbit(&alg, &phi, &phi2);
                    emit(json, json!({
                        "phi": json_vec(&phi.coords),
                        "phi2": json_vec(&phi2.coords),
                        "same_orbit": witness.is_some(),
                        "witness": witness.as_ref().map(|w| json_vec(&w.coords)),
                    }), || match &witness {
                        Some(w) => {
                            println!("same orbit: true");
                            println!("witness: {}", fmt_vec(&w.coords));
                        }
                        None => println!("same orbit: false"),
                    });
                    Ok(0)
                }
            }
        }

        Cmd::Polar { algebra, sigma, elem, json } => {
            let (alg, inv) = require_sigma(&algebra, &sigma)?;
            let coords = form_of(&elem, alg.dim)?;
            let u = GroupElement::new(coords);
            let (uplus, uminus) = polar_decompose(&alg, &inv, &u);
            debug_assert_eq!(multiply(&alg, &uplus, &uminus).coords, u.coords);
            emit(json, json!({
                "u": json_vec(&u.coords),
                "u_plus": json_vec(&uplus.coords),
                "u_minus": json_vec(&uminus.coords),
            }), || {
                println!("u+ = {}", fmt_vec(&uplus.coords));
                println!("u- = {}", fmt_vec(&uminus.coords));
            });
            Ok(0)
        }

        Cmd::Distinguish { algebra, sigma, phi, json } => {
            let (alg, inv) = require_sigma(&algebra, &sigma)?;
            let phi = LinearForm::new(form_of(&phi, alg.dim)?);
            let report = distinguish(&alg, &inv, &phi);
            emit(json, json!({
                "phi": json_vec(&report.phi.coords),
                "distinguished": report.distinguished,
                "sigma_fixed_rep": report.sigma_fixed_rep.as_ref().map(|f| json_vec(&f.coords)),
                "stable_polarization": report.stable_polarization.as_ref()
                    .map(|s| json_basis(&s.space)),
                "witness": report.witness.as_ref().map(|w| json_vec(&w.coords)),
            }), || {
                println!("distinguished: {}", report.distinguished);
                if let Some(f) = &report.sigma_fixed_rep {
                    println!("fixed representative: {}", fmt_vec(&f.coords));
                }
                if let Some(s) = &report.stable_polarization {
                    println!("stable polarization (dim {}):", s.space.dim());
                    print_basis("  ", &s.space);
                }
                if let Some(w) = &report.witness {
                    println!("witness: {}", fmt_vec(&w.coords));
                }
            });
            Ok(0)
        }

        Cmd::Classify { algebra, sigma, mode, phi, p, json } => {
            let (alg, inv) = require_sigma(&algebra, &sigma)?;
            match mode.as_str() {
                "rational" => {
                    let phi = phi.ok_or_else(|| parse_err("--mode rational needs --phi"))?;
                    let phi = LinearForm::new(form_of(&phi, alg.dim)?);
                    let rep = nilorbit::symmetric::distinguished_canonical_rep(&alg, &inv, &phi);
                    emit(json, json!({
                        "mode": "rational",
                        "phi": json_vec(&phi.coords),
                        "distinguished": rep.is_some(),
                        "canonical_rep": rep.as_ref().map(|f| json_vec(&f.coords)),
                    }), || match &rep {
                        Some(f) => println!("distinguished, canonical representative {}", fmt_vec(&f.coords)),
                        None => println!("not distinguished"),
                    });
                    Ok(0)
                }
                "finite" => {
                    let p = p.ok_or_else(|| parse_err("--mode finite needs --p"))?;
                    let cls = classify_finite(&alg, &inv, p).map_err(|e| invalid(e.to_string()))?;
                    emit(json, json!({
                        "mode": "finite",
                        "p": cls.p,
                        "fixed_dim": cls.fixed_dim,
                        "count": cls.count(),
                        "reps": cls.reps,
                        "sizes": cls.sizes,
                    }), || {
                        println!("p = {}, fixed subalgebra dim {}", cls.p, cls.fixed_dim);
                        println!("distinguished orbits: {}", cls.count());
                        for (r, s) in cls.reps.iter().zip(&cls.sizes) {
                            println!("  rep {:?} (orbit size {})", r, s);
                        }
                    });
                    Ok(0)
                }
                other => Err(parse_err(format!("unknown mode {:?}", other))),
            }
        }

        Cmd::Galois { algebra, eps, p, json } => {
            let (alg, _) = load_algebra(&algebra)?;
            let eps = rat_of(&eps)?;
            let model = galois_model(&alg, &eps).map_err(|e| invalid(e.to_string()))?;
            if let Some(p) = p {
                let e = reduce_rat(&eps, p).map_err(|e| invalid(e.to_string()))?;
                if is_square_mod(e, p) {
                    return Err(invalid(format!(
                        "eps = {} is a square mod {}",
                        format_rat(&eps), p
                    )));
                }
            }
            let doubled = algebra_to_json(&model.algebra, Some(&model.involution.matrix));
            emit(json, json!({
                "base_dim": model.base_dim,
                "eps": format_rat(&model.eps),
                "algebra": doubled,
            }), || {
                println!("base dim {}, doubled dim {}, eps = {}",
                    model.base_dim, model.algebra.dim, format_rat(&model.eps));
                println!("{}", serde_json::to_string_pretty(
                    &algebra_to_json(&model.algebra, Some(&model.involution.matrix)))
                    .expect("algebra serializes"));
            });
            Ok(0)
        }

        Cmd::Oracle { algebra, p, sigma, exhaustive, json } => {
            let (alg, inv) = load_with_sigma(&algebra, sigma.as_deref())?;
            let inv = inv.unwrap_or_else(|| Involution::identity(alg.dim));
            let mut opts = OracleOptions::default();
            opts.exhaustive_subalgebras = exhaustive;
            opts.exhaustive_characters = exhaustive;
            let report = full_check(&alg, &inv, p, &opts).map_err(|e| invalid(e.to_string()))?;
            let ok = report.all_passed();
            emit(json, serde_json::to_value(&report).expect("report serializes"), || {
                println!("p = {}, |U| = {}, {} irreducibles, sum chi(1)^2 = {}",
                    report.p, report.group_order, report.irreducible_count,
                    report.sum_chi1_squared);
                println!("distinguished: {}  fixed-group orbits: {}",
                    report.distinguished_count, report.usigma_orbit_count);
                for item in &report.items {
                    let tag = if item.passed { "PASS" } else { "FAIL" };
                    println!("{} {}: {}", tag, item.name, item.detail);
                }
            });
            Ok(if ok { 0 } else { 3 })
        }
    }
}

fn form_of(s: &str, dim: usize) -> Result<Vec<Rat>, Failure> {
    let v = vec_of(s)?;
    if v.len() != dim {
        return Err(parse_err(format!("expected {} coordinates, got {}", dim, v.len())));
    }
    Ok(v)
}

/// Serialize an algebra (and optional involution) in the input file schema,
/// so the output of `galois` can be fed back in.
fn algebra_to_json(alg: &LieAlgebra, sigma: Option<&Mat>) -> serde_json::Value {
    use num_traits::Zero;
    let mut brackets = Vec::new();
    for i in 0..alg.dim {
        for j in (i + 1)..alg.dim {
            let c = &alg.brackets[i][j];
            let out: Vec<serde_json::Value> = c
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(|(k, r)| json!([k + 1, format_rat(r)]))
                .collect();
            if !out.is_empty() {
                brackets.push(json!({"i": i + 1, "j": j + 1, "out": out}));
            }
        }
    }
    let mut value = json!({
        "name": "algebra",
        "dim": alg.dim,
        "labels": alg.labels,
        "brackets": brackets,
    });
    if let Some(m) = sigma {
        let rows: Vec<Vec<String>> = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| format_rat(&m[(i, j)])).collect())
            .collect();
        value["sigma"] = json!(rows);
    }
    value
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own message; fold all usage errors into code 1
            let _ = e.print();
            exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => exit(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            exit(f.code);
        }
    }
}
