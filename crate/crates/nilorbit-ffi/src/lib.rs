//! C interface: opaque handles over the core library, status codes, and JSON
//! strings for structured results. Every output string is allocated here and
//! must be released with `no_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use nilorbit::group::{coadjoint, multiply, polar_decompose, GroupElement, LinearForm};
use nilorbit::kirillov::{is_polarized, orbit_canonical_form, same_orbit, vergne_polarization};
use nilorbit::nilpotent::{catalog, from_json, AlgebraError, LieAlgebra, CATALOG_NAMES};
use nilorbit::ratlin::{format_rat, parse_rat, Mat, Rat, Subspace};
use nilorbit::symmetric::{distinguish, Involution};
use nilorbit::finfield::{classify_finite, full_check, OracleOptions};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NoStatus {
    /// Success.
    NoOk = 0,
    /// Malformed input: unknown name, bad JSON, bad rational literal.
    NoParseError = 1,
    /// Input parsed but is not a valid object (Jacobi failure, σ² ≠ id, …).
    NoValidationError = 2,
    /// The verification suite ran and at least one check failed.
    NoCheckFailed = 3,
    /// A required pointer argument was null.
    NoNullPointer = 4,
}

/// Opaque: a nilpotent Lie algebra, plus the involution matrix embedded in
/// its source file, if any.
pub struct NoAlgebra {
    alg: LieAlgebra,
    file_sigma: Option<Mat>,
}

/// Opaque: a validated involutive automorphism of a specific algebra.
pub struct NoInvolution {
    inv: Involution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn fail(status: NoStatus, msg: impl Into<String>) -> NoStatus {
    let msg = msg.into().replace('\0', "?");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap());
    status
}

/// Message for the most recent failure on this thread. Borrowed pointer;
/// valid until the next failing call. Never null.
#[no_mangle]
pub extern "C" fn no_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned through an `out_json` parameter.
#[no_mangle]
pub extern "C" fn no_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, NoStatus> {
    if p.is_null() {
        return Err(fail(NoStatus::NoNullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(NoStatus::NoParseError, "argument is not valid UTF-8"))
}

fn give_string(out: *mut *mut c_char, value: serde_json::Value) -> NoStatus {
    if out.is_null() {
        return fail(NoStatus::NoNullPointer, "null output pointer");
    }
    let s = serde_json::to_string(&value).expect("report serializes");
    unsafe { *out = CString::new(s).unwrap().into_raw() };
    NoStatus::NoOk
}

fn parse_form(alg: &LieAlgebra, csv: &str) -> Result<LinearForm, NoStatus> {
    let coords: Option<Vec<Rat>> = csv.split(',').map(|s| parse_rat(s.trim())).collect();
    match coords {
        Some(c) if c.len() == alg.dim => Ok(LinearForm::new(c)),
        Some(c) => Err(fail(
            NoStatus::NoParseError,
            format!("expected {} coordinates, got {}", alg.dim, c.len()),
        )),
        None => Err(fail(NoStatus::NoParseError, format!("bad coordinate list {csv:?}"))),
    }
}

fn json_vec(v: &[Rat]) -> serde_json::Value {
    serde_json::json!(v.iter().map(format_rat).collect::<Vec<_>>())
}

fn json_basis(s: &Subspace) -> serde_json::Value {
    serde_json::json!(s.basis_vectors().iter().map(|r| json_vec(r)).collect::<Vec<_>>())
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(r) => r,
            None => return fail(NoStatus::NoNullPointer, "null handle"),
        }
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Build one of the built-in algebras by name ("h3", "filiform4", "ut4", …).
#[no_mangle]
pub extern "C" fn no_algebra_catalog(name: *const c_char, out: *mut *mut NoAlgebra) -> NoStatus {
    let name = try_status!(unsafe { read_str(name) });
    if out.is_null() {
        return fail(NoStatus::NoNullPointer, "null output pointer");
    }
    if !CATALOG_NAMES.contains(&name) {
        return fail(NoStatus::NoParseError, format!("unknown catalog name {name:?}"));
    }
    match catalog(name) {
        Ok(alg) => {
            unsafe { *out = Box::into_raw(Box::new(NoAlgebra { alg, file_sigma: None })) };
            NoStatus::NoOk
        }
        Err(e) => fail(NoStatus::NoValidationError, e.to_string()),
    }
}

/// Build an algebra from the JSON schema
/// `{name, dim, labels, brackets: [{i, j, out: [[k, "num/den"], …]}, …]}`
/// (1-based indices; an optional "sigma" key carries an involution matrix).
#[no_mangle]
pub extern "C" fn no_algebra_from_json(text: *const c_char, out: *mut *mut NoAlgebra) -> NoStatus {
    let text = try_status!(unsafe { read_str(text) });
    if out.is_null() {
        return fail(NoStatus::NoNullPointer, "null output pointer");
    }
    match from_json(text) {
        Ok((alg, file_sigma)) => {
            unsafe { *out = Box::into_raw(Box::new(NoAlgebra { alg, file_sigma })) };
            NoStatus::NoOk
        }
        Err(AlgebraError::BadInput(m)) => fail(NoStatus::NoParseError, m),
        Err(e) => fail(NoStatus::NoValidationError, e.to_string()),
    }
}

#[no_mangle]
pub extern "C" fn no_algebra_free(alg: *mut NoAlgebra) {
    if !alg.is_null() {
        unsafe { drop(Box::from_raw(alg)) };
    }
}

/// Dimension, or -1 on a null handle.
#[no_mangle]
pub extern "C" fn no_algebra_dim(alg: *const NoAlgebra) -> i64 {
    unsafe { alg.as_ref() }.map_or(-1, |a| a.alg.dim as i64)
}

/// Nilpotency class, or -1 on a null handle.
#[no_mangle]
pub extern "C" fn no_algebra_class(alg: *const NoAlgebra) -> i64 {
    unsafe { alg.as_ref() }.map_or(-1, |a| a.alg.class as i64)
}

fn make_involution(
    alg: &LieAlgebra,
    matrix: Mat,
    out: *mut *mut NoInvolution,
) -> NoStatus {
    if out.is_null() {
        return fail(NoStatus::NoNullPointer, "null output pointer");
    }
    match Involution::new(alg, matrix) {
        Ok(inv) => {
            unsafe { *out = Box::into_raw(Box::new(NoInvolution { inv })) };
            NoStatus::NoOk
        }
        Err(e) => fail(NoStatus::NoValidationError, e.to_string()),
    }
}

/// Parse an involution matrix given as slash-separated rows of
/// comma-separated rationals, e.g. `"-1,0,0/0,1,0/0,0,-1"`.
#[no_mangle]
pub extern "C" fn no_involution_parse(
    alg: *const NoAlgebra,
    rows: *const c_char,
    out: *mut *mut NoInvolution,
) -> NoStatus {
    let a = deref!(alg);
    let rows = try_status!(unsafe { read_str(rows) });
    let parsed: Option<Vec<Vec<Rat>>> = rows
        .split('/')
        .map(|r| r.split(',').map(|s| parse_rat(s.trim())).collect())
        .collect();
    let parsed = match parsed {
        Some(p) if p.len() == a.alg.dim && p.iter().all(|r| r.len() == a.alg.dim) => p,
        _ => {
            let d = a.alg.dim;
            return fail(NoStatus::NoParseError, format!("sigma must be a {d}x{d} matrix"));
        }
    };
    make_involution(&a.alg, Mat::from_rows(parsed), out)
}

/// Use the involution embedded in the algebra's source JSON ("sigma" key).
#[no_mangle]
pub extern "C" fn no_involution_from_algebra(
    alg: *const NoAlgebra,
    out: *mut *mut NoInvolution,
) -> NoStatus {
    let a = deref!(alg);
    match &a.file_sigma {
        Some(m) => make_involution(&a.alg, m.clone(), out),
        None => fail(NoStatus::NoValidationError, "algebra carries no sigma matrix"),
    }
}

#[no_mangle]
pub extern "C" fn no_involution_free(inv: *mut NoInvolution) {
    if !inv.is_null() {
        unsafe { drop(Box::from_raw(inv)) };
    }
}

/// Vergne polarization at a form given as comma-separated rational
/// coordinates. JSON result: `{phi, polarization_dim, is_polarized, basis}`.
#[no_mangle]
pub extern "C" fn no_polarize(
    alg: *const NoAlgebra,
    phi: *const c_char,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let phi = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(phi) })));
    let flag = a.alg.jordan_holder_flag(None);
    let pol = vergne_polarization(&a.alg, &phi, &flag);
    let polarized = match is_polarized(&a.alg, &phi, &pol.space) {
        Ok(b) => b,
        Err(e) => return fail(NoStatus::NoValidationError, e.to_string()),
    };
    give_string(out_json, serde_json::json!({
        "phi": json_vec(&phi.coords),
        "polarization_dim": pol.space.dim(),
        "is_polarized": polarized,
        "basis": json_basis(&pol.space),
    }))
}

/// Canonical representative of the coadjoint orbit of a form.
/// JSON result: `{phi, canonical, witness}`.
#[no_mangle]
pub extern "C" fn no_orbit_canonical(
    alg: *const NoAlgebra,
    phi: *const c_char,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let phi = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(phi) })));
    let (canon, witness) = orbit_canonical_form(&a.alg, &phi);
    give_string(out_json, serde_json::json!({
        "phi": json_vec(&phi.coords),
        "canonical": json_vec(&canon.coords),
        "witness": json_vec(&witness.coords),
    }))
}

/// Same-orbit test. JSON result: `{same_orbit, witness}` where `witness`
/// moves the first form to the second when present.
#[no_mangle]
pub extern "C" fn no_same_orbit(
    alg: *const NoAlgebra,
    phi1: *const c_char,
    phi2: *const c_char,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let phi1 = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(phi1) })));
    let phi2 = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(phi2) })));
    let witness = same_orbit(&a.alg, &phi1, &phi2);
    give_string(out_json, serde_json::json!({
        "same_orbit": witness.is_some(),
        "witness": witness.as_ref().map(|w| json_vec(&w.coords)),
    }))
}

/// Polar decomposition u = u⁺·u⁻ of a group element given by logarithm
/// coordinates. JSON result: `{u, u_plus, u_minus}`.
#[no_mangle]
pub extern "C" fn no_polar_decompose(
    alg: *const NoAlgebra,
    inv: *const NoInvolution,
    elem: *const c_char,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let s = deref!(inv);
    let coords = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(elem) })));
    let u = GroupElement::new(coords.coords);
    let (uplus, uminus) = polar_decompose(&a.alg, &s.inv, &u);
    debug_assert_eq!(multiply(&a.alg, &uplus, &uminus), u);
    give_string(out_json, serde_json::json!({
        "u": json_vec(&u.coords),
        "u_plus": json_vec(&uplus.coords),
        "u_minus": json_vec(&uminus.coords),
    }))
}

/// Distinction report for a form. JSON result:
/// `{distinguished, sigma_fixed_rep, stable_polarization, witness}`.
#[no_mangle]
pub extern "C" fn no_distinguish(
    alg: *const NoAlgebra,
    inv: *const NoInvolution,
    phi: *const c_char,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let s = deref!(inv);
    let phi = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(phi) })));
    let report = distinguish(&a.alg, &s.inv, &phi);
    give_string(out_json, serde_json::json!({
        "phi": json_vec(&report.phi.coords),
        "distinguished": report.distinguished,
        "sigma_fixed_rep": report.sigma_fixed_rep.as_ref().map(|f| json_vec(&f.coords)),
        "stable_polarization": report.stable_polarization.as_ref().map(|p| json_basis(&p.space)),
        "witness": report.witness.as_ref().map(|w| json_vec(&w.coords)),
    }))
}

/// Coadjoint action of a group element on a form, as a JSON coordinate list.
#[no_mangle]
pub extern "C" fn no_coadjoint(
    alg: *const NoAlgebra,
    elem: *const c_char,
    phi: *const c_char,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let u = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(elem) })));
    let phi = try_status!(parse_form(&a.alg, try_status!(unsafe { read_str(phi) })));
    let moved = coadjoint(&a.alg, &GroupElement::new(u.coords), &phi);
    give_string(out_json, serde_json::json!(
        moved.coords.iter().map(format_rat).collect::<Vec<_>>()
    ))
}

/// Count and list the orbits of the fixed subgroup on forms vanishing on the
/// fixed subalgebra, in the finite model at `p`.
/// JSON result: `{p, count, reps, sizes}`.
#[no_mangle]
pub extern "C" fn no_classify_finite(
    alg: *const NoAlgebra,
    inv: *const NoInvolution,
    p: u64,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let s = deref!(inv);
    match classify_finite(&a.alg, &s.inv, p) {
        Ok(cls) => give_string(out_json, serde_json::json!({
            "p": cls.p,
            "count": cls.count(),
            "reps": cls.reps,
            "sizes": cls.sizes,
        })),
        Err(e) => fail(NoStatus::NoValidationError, e.to_string()),
    }
}

/// Run the full finite-field verification suite at `p`. The report is always
/// written on success of the computation; the status is `NoCheckFailed` when
/// any individual check fails.
#[no_mangle]
pub extern "C" fn no_oracle(
    alg: *const NoAlgebra,
    inv: *const NoInvolution,
    p: u64,
    out_json: *mut *mut c_char,
) -> NoStatus {
    let a = deref!(alg);
    let sigma = match unsafe { inv.as_ref() } {
        Some(s) => s.inv.clone(),
        None => Involution::identity(a.alg.dim),
    };
    match full_check(&a.alg, &sigma, p, &OracleOptions::default()) {
        Ok(report) => {
            let ok = report.all_passed();
            let status = give_string(
                out_json,
                serde_json::to_value(&report).expect("report serializes"),
            );
            if status != NoStatus::NoOk {
                status
            } else if ok {
                NoStatus::NoOk
            } else {
                fail(NoStatus::NoCheckFailed, "one or more checks failed; see report")
            }
        }
        Err(e) => fail(NoStatus::NoValidationError, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn take_string(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
        no_string_free(p);
        s
    }

    fn catalog_handle(name: &str) -> *mut NoAlgebra {
        let mut out = std::ptr::null_mut();
        assert_eq!(no_algebra_catalog(cstr(name).as_ptr(), &mut out), NoStatus::NoOk);
        out
    }

    #[test]
    fn catalog_and_metadata() {
        let h = catalog_handle("h3");
        assert_eq!(no_algebra_dim(h), 3);
        assert_eq!(no_algebra_class(h), 2);
        no_algebra_free(h);
        let mut out = std::ptr::null_mut();
        assert_eq!(
            no_algebra_catalog(cstr("nope").as_ptr(), &mut out),
            NoStatus::NoParseError
        );
        let msg = unsafe { CStr::from_ptr(no_last_error()) }.to_str().unwrap();
        assert!(msg.contains("nope"));
    }

    #[test]
    fn json_roundtrip_with_sigma() {
        let text = r#"{
            "dim": 3,
            "brackets": [{"i": 1, "j": 2, "out": [[3, "1"]]}],
            "sigma": [["-1","0","0"],["0","1","0"],["0","0","-1"]]
        }"#;
        let mut alg = std::ptr::null_mut();
        assert_eq!(no_algebra_from_json(cstr(text).as_ptr(), &mut alg), NoStatus::NoOk);
        let mut inv = std::ptr::null_mut();
        assert_eq!(no_involution_from_algebra(alg, &mut inv), NoStatus::NoOk);
        let mut out = std::ptr::null_mut();
        assert_eq!(
            no_distinguish(alg, inv, cstr("0,0,1").as_ptr(), &mut out),
            NoStatus::NoOk
        );
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["distinguished"], serde_json::json!(true));
        no_involution_free(inv);
        no_algebra_free(alg);
    }

    #[test]
    fn polarize_and_orbit() {
        let alg = catalog_handle("h3");
        let mut out = std::ptr::null_mut();
        assert_eq!(no_polarize(alg, cstr("0,0,1").as_ptr(), &mut out), NoStatus::NoOk);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["is_polarized"], serde_json::json!(true));
        assert_eq!(v["polarization_dim"], serde_json::json!(2));

        let mut out = std::ptr::null_mut();
        assert_eq!(
            no_orbit_canonical(alg, cstr("5,7,1").as_ptr(), &mut out),
            NoStatus::NoOk
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["canonical"], serde_json::json!(["0", "0", "1"]));

        let mut out = std::ptr::null_mut();
        assert_eq!(
            no_same_orbit(alg, cstr("0,0,1").as_ptr(), cstr("0,5,1").as_ptr(), &mut out),
            NoStatus::NoOk
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["same_orbit"], serde_json::json!(true));
        no_algebra_free(alg);
    }

    #[test]
    fn polar_and_classify() {
        let alg = catalog_handle("h3");
        let mut inv = std::ptr::null_mut();
        assert_eq!(
            no_involution_parse(alg, cstr("-1,0,0/0,1,0/0,0,-1").as_ptr(), &mut inv),
            NoStatus::NoOk
        );
        let mut out = std::ptr::null_mut();
        assert_eq!(
            no_polar_decompose(alg, inv, cstr("1,2,1/2").as_ptr(), &mut out),
            NoStatus::NoOk
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["u_plus"], serde_json::json!(["0", "2", "0"]));

        let mut out = std::ptr::null_mut();
        assert_eq!(no_classify_finite(alg, inv, 3, &mut out), NoStatus::NoOk);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["count"], serde_json::json!(5));
        no_involution_free(inv);
        no_algebra_free(alg);
    }

    #[test]
    fn oracle_passes_on_heisenberg() {
        let alg = catalog_handle("h3");
        let mut inv = std::ptr::null_mut();
        assert_eq!(
            no_involution_parse(alg, cstr("-1,0,0/0,1,0/0,0,-1").as_ptr(), &mut inv),
            NoStatus::NoOk
        );
        let mut out = std::ptr::null_mut();
        assert_eq!(no_oracle(alg, inv, 3, &mut out), NoStatus::NoOk);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["distinguished_count"], serde_json::json!(5));
        assert_eq!(v["sum_chi1_squared"], serde_json::json!(27));
        no_involution_free(inv);
        no_algebra_free(alg);
    }

    #[test]
    fn null_arguments_are_rejected() {
        assert_eq!(
            no_algebra_catalog(std::ptr::null(), std::ptr::null_mut()),
            NoStatus::NoNullPointer
        );
        let mut out = std::ptr::null_mut();
        assert_eq!(
            no_polarize(std::ptr::null(), cstr("0").as_ptr(), &mut out),
            NoStatus::NoNullPointer
        );
        assert_eq!(no_algebra_dim(std::ptr::null()), -1);
        no_string_free(std::ptr::null_mut());
    }
}
