//! The brute-force verification suite: exhaustive finite-field analogues of
//! the irreducibility, orbit-equality, multiplicity-one, self-duality,
//! bijection-count and invariant-functional statements, plus the mod-p
//! mirror of the rational orbit canonicalizer.

use super::characters::*;
use super::cyclotomic::CycInt;
use super::model::*;
use super::modp::*;
use crate::nilpotent::LieAlgebra;
use crate::symmetric::Involution;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Char(#[from] CharError),
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Test every subalgebra (default: only when dim ≤ 4).
    pub exhaustive_subalgebras: Option<bool>,
    /// Compare induced characters across every form (default: dim ≤ 4).
    pub exhaustive_characters: Option<bool>,
    /// Sampled-mode budget per orbit representative.
    pub subalgebra_samples: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            exhaustive_subalgebras: None,
            exhaustive_characters: None,
            subalgebra_samples: 12,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullReport {
    pub p: u64,
    pub dim: usize,
    pub group_order: usize,
    pub irreducible_count: usize,
    pub sum_chi1_squared: i64,
    pub distinguished_count: usize,
    pub usigma_orbit_count: usize,
    pub items: Vec<CheckItem>,
}

impl FullReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// U^σ-orbit classification of the forms vanishing on 𝒩^σ.
#[derive(Clone, Debug)]
pub struct FiniteClassification {
    pub p: u64,
    pub fixed_dim: usize,
    pub reps: Vec<Vec<u64>>,
    pub sizes: Vec<usize>,
}

impl FiniteClassification {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

fn fixed_space_fp(sigma_fp: &MatFp) -> SubspaceFp {
    let p = sigma_fp.p;
    let n = sigma_fp.rows;
    sigma_fp.add(&MatFp::identity(p, n).scale(p - 1)).kernel()
}

/// Forms vanishing on a subspace: the kernel of its basis matrix acting on
/// dual coordinates.
fn vanishing_forms(p: u64, dim: usize, space: &SubspaceFp) -> SubspaceFp {
    if space.dim() == 0 {
        return SubspaceFp::full(p, dim);
    }
    MatFp::from_rows(p, space.basis_vectors()).kernel()
}

pub fn classify_finite(
    alg: &LieAlgebra,
    sigma: &Involution,
    p: u64,
) -> Result<FiniteClassification, CheckError> {
    let model = reduce_mod_p(alg, p)?;
    let sigma_fp = reduce_mat(&sigma.matrix, p)?;
    let fixed = fixed_space_fp(&sigma_fp);
    let forms = vanishing_forms(p, model.dim, &fixed);
    let points: Vec<usize> = forms.elements().iter().map(|v| model.encode(v)).collect();
    let gens = model.coadjoint_generators(&fixed.basis_vectors());
    let part = linear_orbits(&model, points, &gens)?;
    Ok(FiniteClassification {
        p,
        fixed_dim: fixed.dim(),
        reps: part.reps.iter().map(|&r| model.decode(r)).collect(),
        sizes: part.sizes,
    })
}

/// Every subspace of F_p^n, by enumeration of reduced row-echelon bases.
pub fn all_subspaces(p: u64, n: usize) -> Vec<SubspaceFp> {
    let mut out = vec![SubspaceFp::zero(p, n)];
    let mut pivots = Vec::new();
    enumerate_pivot_sets(p, n, 0, &mut pivots, &mut out);
    out
}

fn enumerate_pivot_sets(
    p: u64,
    n: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<SubspaceFp>,
) {
    for c in start..n {
        pivots.push(c);
        emit_rref_fill(p, n, pivots, out);
        enumerate_pivot_sets(p, n, c + 1, pivots, out);
        pivots.pop();
    }
}

fn emit_rref_fill(p: u64, n: usize, pivots: &[usize], out: &mut Vec<SubspaceFp>) {
    // free entries: (row r, col c) with c > pivots[r] and c not a pivot
    let k = pivots.len();
    let mut free = Vec::new();
    for (r, &pc) in pivots.iter().enumerate() {
        for c in pc + 1..n {
            if !pivots.contains(&c) {
                free.push((r, c));
            }
        }
    }
    let total = (p as usize).pow(free.len() as u32);
    for mut code in 0..total {
        let mut rows = vec![vec![0u64; n]; k];
        for (r, &pc) in pivots.iter().enumerate() {
            rows[r][pc] = 1;
        }
        for &(r, c) in &free {
            rows[r][c] = (code % p as usize) as u64;
            code /= p as usize;
        }
        let basis = MatFp::from_rows(p, rows);
        out.push(SubspaceFp {
            p,
            ambient: n,
            basis,
            pivots: pivots.to_vec(),
        });
    }
}

fn is_subalgebra_fp(model: &FiniteModel, s: &SubspaceFp) -> bool {
    let basis = s.basis_vectors();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if !s.contains(&model.bracket_fp(a, b)) {
                return false;
            }
        }
    }
    true
}

fn is_isotropic_fp(model: &FiniteModel, phi: &[u64], s: &SubspaceFp) -> bool {
    check_character(model, phi, s).is_ok()
}

/// Mirror of the rational canonicalizer: zero out reachable flag coordinates
/// bottom-up, entirely in F_p. Fibers of this map are exactly the orbits of
/// exp(span(acting)) — the tested contract.
pub fn canonicalize_fp(
    model: &FiniteModel,
    acting: &[Vec<u64>],
    adapted: &[Vec<u64>],
    phi: &[u64],
) -> Vec<u64> {
    let p = model.p;
    let mut cur = phi.to_vec();
    if acting.is_empty() {
        return cur;
    }
    for j in 0..adapted.len() {
        let t = dot_mod(&cur, &adapted[j], p);
        if t == 0 {
            continue;
        }
        let mut a = MatFp::zeros(p, j + 1, acting.len());
        for k in 0..=j {
            for (col, v) in acting.iter().enumerate() {
                a.set(k, col, dot_mod(&cur, &model.bracket_fp(v, &adapted[k]), p));
            }
        }
        let mut rhs = vec![0u64; j + 1];
        rhs[j] = 1;
        let Some(c) = a.solve(&rhs) else {
            continue;
        };
        let mut v = vec![0u64; model.dim];
        for (col, &cv) in c.iter().enumerate() {
            for i in 0..model.dim {
                v[i] = (v[i] + cv * acting[col][i]) % p;
            }
        }
        let u: Vec<u64> = v.iter().map(|&x| x * t % p).collect();
        cur = model.coadjoint(&u, &cur);
        debug_assert_eq!(dot_mod(&cur, &adapted[j], p), 0);
    }
    cur
}

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Random subalgebras inside an isotropic subalgebra (its subspaces are
/// automatically isotropic; closure under the bracket is tested).
fn sampled_subalgebras(
    model: &FiniteModel,
    pol: &SubspaceFp,
    count: usize,
    rng: &mut Rng,
) -> Vec<SubspaceFp> {
    let mut out: Vec<SubspaceFp> = vec![SubspaceFp::zero(model.p, model.dim), pol.clone()];
    let basis = pol.basis_vectors();
    let d = basis.len();
    if d == 0 {
        return out;
    }
    let mut tries = 0;
    while out.len() < count + 2 && tries < count * 30 {
        tries += 1;
        let k = 1 + rng.below(d as u64) as usize;
        let mut vs = Vec::new();
        for _ in 0..k {
            let mut v = vec![0u64; model.dim];
            for b in &basis {
                let c = rng.below(model.p);
                for i in 0..model.dim {
                    v[i] = (v[i] + c * b[i]) % model.p;
                }
            }
            vs.push(v);
        }
        let s = SubspaceFp::from_spanning(model.p, model.dim, vs);
        if s.dim() == 0 || !is_subalgebra_fp(model, &s) || out.contains(&s) {
            continue;
        }
        out.push(s);
    }
    out
}

fn subspace_key(s: &SubspaceFp) -> (Vec<usize>, Vec<u64>) {
    (s.pivots.clone(), s.basis.data.clone())
}

/// The invariant functional λ(f) = Σ_{U′^σ\U^σ} f(u) on the induced space of
/// (𝒩′, φ₀): checks λ ≠ 0 and λ∘π(h) = λ for generators h of U^σ.
fn lambda_check(
    model: &FiniteModel,
    phi0: &[u64],
    npol: &SubspaceFp,
    fixed: &SubspaceFp,
) -> Result<(), String> {
    let p = model.p;
    let nsub = model.subgroup(npol);
    // right cosets U′g of U′ in U
    let mut rcoset_of = vec![u32::MAX; model.order];
    let mut rreps: Vec<Vec<u64>> = Vec::new();
    let member_vecs: Vec<Vec<u64>> = nsub.members.iter().map(|&m| model.decode(m)).collect();
    for g in 0..model.order {
        if rcoset_of[g] != u32::MAX {
            continue;
        }
        let id = rreps.len() as u32;
        let gv = model.decode(g);
        for u in &member_vecs {
            rcoset_of[model.encode(&model.mul(u, &gv))] = id;
        }
        rreps.push(gv);
    }
    // right-coset representatives of U′^σ in U^σ
    let upsig = npol.intersect(fixed);
    let upsig_members: Vec<Vec<u64>> =
        upsig.elements();
    let mut seen: HashMap<usize, ()> = HashMap::new();
    let mut sig_reps: Vec<Vec<u64>> = Vec::new();
    for u in fixed.elements() {
        let idx = model.encode(&u);
        if seen.contains_key(&idx) {
            continue;
        }
        for w in &upsig_members {
            seen.insert(model.encode(&model.mul(w, &u)), ());
        }
        sig_reps.push(u);
    }
    // f_x(w) = ψ_{φ0}(w·x⁻¹) when w ∈ U′x, else 0
    let f_at = |x: &[u64], w: &[u64]| -> Option<u64> {
        let r = model.mul(w, &model.inv(x));
        if nsub.in_sub[model.encode(&r)] {
            Some(dot_mod(phi0, &r, p))
        } else {
            None
        }
    };
    let lambda = |x: &[u64], shift: Option<&[u64]>| -> CycInt {
        let mut s = CycInt::zero(p);
        for u in &sig_reps {
            let w = match shift {
                None => u.clone(),
                Some(h) => model.mul(u, h),
            };
            if let Some(e) = f_at(x, &w) {
                s.add_assign(&CycInt::zeta_pow(p, e));
            }
        }
        s
    };
    let lams: Vec<CycInt> = rreps.iter().map(|x| lambda(x, None)).collect();
    if lams.iter().all(|l| l.is_zero()) {
        return Err("functional vanishes on every basis function".into());
    }
    for h in fixed.basis_vectors() {
        for (x, lam) in rreps.iter().zip(&lams) {
            let shifted = lambda(x, Some(&h));
            if shifted != *lam {
                return Err(format!(
                    "functional not invariant under generator {:?} at coset of {:?}",
                    h, x
                ));
            }
        }
    }
    Ok(())
}

pub fn full_check(
    alg: &LieAlgebra,
    sigma: &Involution,
    p: u64,
    opts: &OracleOptions,
) -> Result<FullReport, CheckError> {
    let model = reduce_mod_p(alg, p)?;
    let sigma_fp = reduce_mat(&sigma.matrix, p)?;
    let fixed = fixed_space_fp(&sigma_fp);
    let (irrs, orbit_part) = irreducibles(&model)?;
    let mut items = Vec::new();

    // Character-theory sanity: Σ χ(1)² = |U|.
    let sumsq: i64 = irrs.iter().map(|i| i.chi.degree(&model).pow(2)).sum();
    items.push(CheckItem {
        name: "sum-of-squares".into(),
        passed: sumsq == model.order as i64,
        detail: format!("sum chi(1)^2 = {}, |U| = {}", sumsq, model.order),
    });

    // (a) irreducible ⟺ polarized, over isotropic subalgebras.
    let exhaustive_sub = opts.exhaustive_subalgebras.unwrap_or(model.dim <= 4);
    let mut a_failures = Vec::new();
    let mut a_pairs = 0usize;
    if exhaustive_sub {
        let mut cache: HashMap<(Vec<usize>, Vec<u64>), Subgroup> = HashMap::new();
        let candidates: Vec<SubspaceFp> = all_subspaces(p, model.dim)
            .into_iter()
            .filter(|s| is_subalgebra_fp(&model, s))
            .collect();
        for irr in &irrs {
            let rad_dim = restricted_radical_fp(&model, &irr.phi, &SubspaceFp::full(p, model.dim)).dim();
            let pol_dim = (model.dim + rad_dim) / 2;
            for s in &candidates {
                if !is_isotropic_fp(&model, &irr.phi, s) {
                    continue;
                }
                a_pairs += 1;
                let sg = cache
                    .entry(subspace_key(s))
                    .or_insert_with(|| model.subgroup(s));
                let m = norm_of_induced(&model, sg, &irr.phi)?;
                let polarized = s.dim() == pol_dim;
                if (m == 1) != polarized || (!polarized && m <= 1) {
                    a_failures.push(format!(
                        "phi={:?} sub-dim={} norm={} polarized={}",
                        irr.phi,
                        s.dim(),
                        m,
                        polarized
                    ));
                }
            }
        }
    } else {
        let mut rng = Rng(opts.seed | 1);
        // sampled orbit representatives: largest handful plus the zero form
        let mut chosen: Vec<usize> = (0..irrs.len()).collect();
        chosen.sort_by_key(|&i| std::cmp::Reverse(irrs[i].orbit_size));
        chosen.truncate(8);
        let zero_orbit = orbit_part.orbit_of[0] as usize;
        if !chosen.contains(&zero_orbit) {
            chosen.push(zero_orbit);
        }
        for &ci in &chosen {
            let irr = &irrs[ci];
            let rad_dim = restricted_radical_fp(&model, &irr.phi, &SubspaceFp::full(p, model.dim)).dim();
            let pol_dim = (model.dim + rad_dim) / 2;
            for s in sampled_subalgebras(&model, &irr.polarization, opts.subalgebra_samples, &mut rng)
            {
                a_pairs += 1;
                let sg = model.subgroup(&s);
                let m = norm_of_induced(&model, &sg, &irr.phi)?;
                let polarized = s.dim() == pol_dim;
                if (m == 1) != polarized || (!polarized && m <= 1) {
                    a_failures.push(format!(
                        "phi={:?} sub-dim={} norm={} polarized={}",
                        irr.phi,
                        s.dim(),
                        m,
                        polarized
                    ));
                }
            }
        }
    }
    items.push(CheckItem {
        name: "irreducible-iff-polarized".into(),
        passed: a_failures.is_empty(),
        detail: if a_failures.is_empty() {
            format!(
                "{} isotropic pairs checked ({})",
                a_pairs,
                if exhaustive_sub { "exhaustive" } else { "sampled" }
            )
        } else {
            a_failures.join("; ")
        },
    });

    // (b) equal orbits ⟺ equal induced characters.
    let exhaustive_chars = opts.exhaustive_characters.unwrap_or(model.dim <= 4);
    if exhaustive_chars {
        let mut by_char: HashMap<Vec<Vec<i64>>, Vec<u32>> = HashMap::new();
        let mut ok = true;
        let mut detail = String::new();
        for f in 0..model.order {
            let phi = model.decode(f);
            let pol = vergne_polarization_fp(&model, &phi, &model.flag_adapted);
            let chi = character_of_induced(&model, &pol, &phi)?;
            let key: Vec<Vec<i64>> = chi.values.iter().map(|v| v.c.clone()).collect();
            by_char
                .entry(key)
                .or_default()
                .push(orbit_part.orbit_of[f]);
        }
        if by_char.len() != orbit_part.reps.len() {
            ok = false;
            detail = format!(
                "{} distinct characters vs {} orbits",
                by_char.len(),
                orbit_part.reps.len()
            );
        }
        for ids in by_char.values() {
            if ids.iter().any(|&i| i != ids[0]) {
                ok = false;
                detail = "one character produced by two different orbits".into();
            }
        }
        items.push(CheckItem {
            name: "orbits-iff-characters".into(),
            passed: ok,
            detail: if ok {
                format!("{} forms, {} orbits, exhaustive", model.order, orbit_part.reps.len())
            } else {
                detail
            },
        });
    } else {
        // orbit representatives only: characters pairwise distinct
        let mut ok = true;
        for i in 0..irrs.len() {
            for j in i + 1..irrs.len() {
                if irrs[i].chi == irrs[j].chi {
                    ok = false;
                }
            }
        }
        items.push(CheckItem {
            name: "orbits-iff-characters".into(),
            passed: ok,
            detail: format!("{} orbit representatives pairwise distinct", irrs.len()),
        });
    }

    // (c) multiplicity bound.
    let usigma = model.subgroup(&fixed);
    let mut homs = Vec::with_capacity(irrs.len());
    let mut c_failures = Vec::new();
    for irr in &irrs {
        let h = hom_dim(&model, &irr.chi, &usigma)?;
        if h > 1 {
            c_failures.push(format!("phi={:?} hom_dim={}", irr.phi, h));
        }
        homs.push(h);
    }
    items.push(CheckItem {
        name: "multiplicity-bound".into(),
        passed: c_failures.is_empty(),
        detail: if c_failures.is_empty() {
            format!("{} irreducibles, hom_dim in {{0,1}}", irrs.len())
        } else {
            c_failures.join("; ")
        },
    });

    // (d) distinguished ⟺ conjugate self-dual.
    let mut d_failures = Vec::new();
    for (irr, &h) in irrs.iter().zip(&homs) {
        let selfdual = irr.chi.compose(&model, &sigma_fp) == irr.chi.conj();
        if (h == 1) != selfdual {
            d_failures.push(format!(
                "phi={:?} hom_dim={} selfdual={}",
                irr.phi, h, selfdual
            ));
        }
    }
    items.push(CheckItem {
        name: "selfdual-iff-distinguished".into(),
        passed: d_failures.is_empty(),
        detail: if d_failures.is_empty() {
            "set equality holds".into()
        } else {
            d_failures.join("; ")
        },
    });
    let distinguished_count = homs.iter().filter(|&&h| h == 1).count();

    // (e) bijection count against U^σ-orbits on (𝒩/𝒩^σ)*.
    let forms = vanishing_forms(p, model.dim, &fixed);
    let sig_points: Vec<usize> = forms.elements().iter().map(|v| model.encode(v)).collect();
    let sig_gens = model.coadjoint_generators(&fixed.basis_vectors());
    let sig_part = linear_orbits(&model, sig_points.clone(), &sig_gens)?;
    let usigma_orbit_count = sig_part.reps.len();
    items.push(CheckItem {
        name: "bijection-count".into(),
        passed: distinguished_count == usigma_orbit_count,
        detail: format!(
            "distinguished = {}, U^sigma-orbits on vanishing forms = {}",
            distinguished_count, usigma_orbit_count
        ),
    });

    // (f) invariant functional from a σ-stable polarization.
    let stable_adapted: Result<Vec<Vec<u64>>, ModelError> = alg
        .jordan_holder_flag(Some(sigma))
        .adapted_basis()
        .iter()
        .map(|v| reduce_vec(v, p))
        .collect();
    let mut f_failures = Vec::new();
    let mut f_count = 0usize;
    match stable_adapted {
        Err(e) => f_failures.push(format!("sigma-stable flag does not reduce mod p: {e}")),
        Ok(adapted) => {
            for (irr, &h) in irrs.iter().zip(&homs) {
                if h != 1 {
                    continue;
                }
                // a σ-fixed form in this orbit
                let Some(&phi0_idx) = sig_points
                    .iter()
                    .find(|&&f| orbit_part.orbit_of[f] == irr.orbit_id)
                else {
                    f_failures.push(format!(
                        "no form vanishing on the fixed part in orbit of {:?}",
                        irr.phi
                    ));
                    continue;
                };
                let phi0 = model.decode(phi0_idx);
                let npol = vergne_polarization_fp(&model, &phi0, &adapted);
                let image = SubspaceFp::from_spanning(
                    p,
                    model.dim,
                    npol.basis_vectors()
                        .iter()
                        .map(|v| sigma_fp.mul_vec(v))
                        .collect(),
                );
                if image != npol {
                    f_failures.push(format!("polarization of {:?} not sigma-stable", phi0));
                    continue;
                }
                if let Err(why) = lambda_check(&model, &phi0, &npol, &fixed) {
                    f_failures.push(format!("phi0={:?}: {}", phi0, why));
                }
                f_count += 1;
            }
        }
    }
    items.push(CheckItem {
        name: "invariant-functional".into(),
        passed: f_failures.is_empty(),
        detail: if f_failures.is_empty() {
            format!("{} distinguished characters checked", f_count)
        } else {
            f_failures.join("; ")
        },
    });

    Ok(FullReport {
        p,
        dim: model.dim,
        group_order: model.order,
        irreducible_count: irrs.len(),
        sum_chi1_squared: sumsq,
        distinguished_count,
        usigma_orbit_count,
        items,
    })
}
