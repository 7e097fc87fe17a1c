use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use mepkit::basis::{compute_moments, GasModel, MomentBasis, PhaseSpace, Quadrature};
use mepkit::closures::{gaussian_flux_10, maxwellian, Distribution, GaussianParams};
use mepkit_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    unsafe { mepkit_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn maxwellian_moments(n: u32) -> Vec<f64> {
    let gas = GasModel::default();
    let basis = MomentBasis::full(n, PhaseSpace::Classical);
    let (v, t) = ([0.2, 0.0, -0.1], 0.9);
    let fe = maxwellian(1.1, v, t, &gas).unwrap();
    let s = t.sqrt();
    let q = Quadrature::new(3, 12, v, [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]], None, &gas).unwrap();
    compute_moments(|x, e| fe.value(x, e), &basis, &q, &gas).unwrap().values
}

#[test]
fn version_and_bound() {
    let v = unsafe { CStr::from_ptr(mepkit_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    assert!((mepkit_speed_bound(2) - (1.8f64).sqrt()).abs() < 1e-15);
}

#[test]
fn closure_handle_round_trip() {
    let values = maxwellian_moments(4);
    let name = CString::new("full:4").unwrap();
    let mut h: *mut MepClosure = ptr::null_mut();
    let st = unsafe { mepkit_closure_solve(name.as_ptr(), values.as_ptr(), values.len(), 0, &mut h) };
    assert_eq!(st, MepStatus::Ok, "{}", last_error());
    assert!(!h.is_null());
    let n = unsafe { mepkit_closure_len(h) };
    assert_eq!(n, values.len());
    assert!(unsafe { mepkit_closure_residual(h) } < 1e-9);

    let mut m = vec![0.0; n];
    assert_eq!(unsafe { mepkit_closure_moments(h, m.as_mut_ptr(), n) }, MepStatus::Ok);
    for (a, b) in m.iter().zip(&values) {
        assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
    }
    // Flux of the mass moment is the momentum.
    let mut f = vec![0.0; n];
    assert_eq!(unsafe { mepkit_closure_flux(h, 0, f.as_mut_ptr(), n) }, MepStatus::Ok);
    let x = MomentBasis::full(4, PhaseSpace::Classical).monomial(1, 0, 0).unwrap();
    assert!((f[0] - values[x]).abs() < 1e-9, "{} vs {}", f[0], values[x]);

    let mut short = vec![0.0; n - 1];
    assert_eq!(
        unsafe { mepkit_closure_multipliers(h, short.as_mut_ptr(), short.len()) },
        MepStatus::BufferTooSmall
    );
    assert!(last_error().contains("needed"));
    assert_eq!(unsafe { mepkit_closure_flux(h, 3, f.as_mut_ptr(), n) }, MepStatus::InvalidInput);
    unsafe { mepkit_closure_free(h) };
}

#[test]
fn failures_map_to_status_codes() {
    let mut h: *mut MepClosure = ptr::null_mut();
    let line = CString::new("line:4").unwrap();
    let junk = [1.0, 0.0, 1.0, 0.0, 4.0];
    let st = unsafe { mepkit_closure_solve(line.as_ptr(), junk.as_ptr(), junk.len(), 0, &mut h) };
    assert_eq!(st, MepStatus::NotRealizable);
    assert!(h.is_null());
    assert!(mepkit_last_error_length() > 0);

    let bogus = CString::new("cubic").unwrap();
    let st = unsafe { mepkit_closure_solve(bogus.as_ptr(), junk.as_ptr(), junk.len(), 0, &mut h) };
    assert_eq!(st, MepStatus::InvalidInput);
    assert!(last_error().contains("cubic"));

    let st = unsafe { mepkit_closure_solve(ptr::null(), junk.as_ptr(), junk.len(), 0, &mut h) };
    assert_eq!(st, MepStatus::NullPointer);
    assert_eq!(unsafe { mepkit_closure_len(ptr::null()) }, 0);
    unsafe { mepkit_closure_free(ptr::null_mut()) };
}

#[test]
fn gaussian_flux_matches_the_library() {
    let v = [0.3, -0.5, 0.2];
    let p = [1.2, 0.3, -0.1, 0.3, 0.8, 0.2, -0.1, 0.2, 1.0];
    let mut out = [0.0; 27];
    let st = unsafe { mepkit_gaussian_flux_10(1.4, v.as_ptr(), p.as_ptr(), out.as_mut_ptr(), 27) };
    assert_eq!(st, MepStatus::Ok);
    let want = gaussian_flux_10(&GaussianParams {
        rho: 1.4,
        v,
        p: std::array::from_fn(|i| std::array::from_fn(|j| p[3 * i + j])),
    });
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(out[9 * i + 3 * j + k], want[i][j][k]);
            }
        }
    }
    let bad = [1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    let st = unsafe { mepkit_gaussian_flux_10(1.0, v.as_ptr(), bad.as_ptr(), out.as_mut_ptr(), 27) };
    assert_ne!(st, MepStatus::Ok);
}

#[test]
fn relativistic_coefficients() {
    let mut c = MepRelCoefficients::default();
    assert_eq!(unsafe { mepkit_rel_closure_coefficients(0.0, 3.0, &mut c) }, MepStatus::Ok);
    let lib = mepkit::relativistic::closure_coefficients(0.0, 3.0, &Default::default()).unwrap();
    assert_eq!((c.c01, c.cpi1, c.c03, c.c05), (lib.c01, lib.cpi1, lib.c03, lib.c05));
    assert_eq!(
        unsafe { mepkit_rel_closure_coefficients(0.0, 3.0, ptr::null_mut()) },
        MepStatus::NullPointer
    );
}

/// The generated header must compile as C and declare every entry point.
#[test]
fn header_compiles_as_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        r#"#include "mepkit.h"
int main(void) {
    MepClosure *h = NULL;
    double v[3] = {0}, p[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1}, out[27];
    MepRelCoefficients c;
    MepStatus s = mepkit_gaussian_flux_10(1.0, v, p, out, 27);
    s = mepkit_rel_closure_coefficients(0.0, 1.0, &c);
    s = mepkit_closure_solve("full:2", v, 3, 0, &h);
    size_t n = mepkit_closure_len(h) + mepkit_closure_iterations(h) + mepkit_last_error_length();
    mepkit_closure_multipliers(h, out, 27);
    mepkit_closure_moments(h, out, 27);
    mepkit_closure_flux(h, 0, out, 27);
    double e = mepkit_closure_entropy(h) + mepkit_closure_residual(h) + mepkit_speed_bound(2);
    char buf[64];
    mepkit_last_error_message(buf, sizeof buf);
    mepkit_closure_free(h);
    return (int)n + (int)e + (s == MEP_STATUS_OK) + (mepkit_version() != NULL);
}
"#,
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .output()
        .expect("a C compiler is on PATH");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
