use mepkit::basis::{compute_moments, GasModel, Moment, MomentBasis, MultiIndex, PhaseSpace, Quadrature};
use mepkit::closures::{
    ellipsoidal_gaussian_11, gaussian_closure_10, gaussian_flux_10, linearized_closure, maxwellian,
    normalization_a, polyatomic_f6, solve_ti, Distribution, EquilibriumState, GaussianParams, PolyatomicEos,
};
use mepkit::Error;
use proptest::prelude::*;

fn chol_scale(p: &[[f64; 3]; 3], rho: f64) -> [[f64; 3]; 3] {
    let m = nalgebra::Matrix3::from_fn(|i, j| p[i][j] / rho);
    let l = m.cholesky().unwrap().l();
    std::array::from_fn(|i| std::array::from_fn(|j| l[(i, j)]))
}

fn sheared() -> GaussianParams {
    GaussianParams { rho: 1.4, v: [0.3, -0.5, 0.2], p: [[1.2, 0.3, -0.1], [0.3, 0.8, 0.2], [-0.1, 0.2, 1.0]] }
}

#[test]
fn gaussian_moments_and_flux_by_quadrature() {
    let gas = GasModel::default();
    let gp = sheared();
    let (g, flux) = gaussian_closure_10(gp.clone(), &gas).unwrap();
    let q = Quadrature::new(3, 4, gp.v, chol_scale(&gp.p, gp.rho), None, &gas).unwrap();
    let basis = MomentBasis::full(3, PhaseSpace::Classical);
    let m = compute_moments(|x, e| g.value(x, e), &basis, &q, &gas).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut a = [0u32; 3];
                a[i] += 1;
                a[j] += 1;
                a[k] += 1;
                let pos = basis.monomial(a[0], a[1], a[2]).unwrap();
                assert!((m.values[pos] - flux[i][j][k]).abs() < 1e-12, "{i}{j}{k}");
            }
            let pos = basis.position(&Moment::Monomial(MultiIndex::unit(i).add(&MultiIndex::unit(j)))).unwrap();
            assert!((m.values[pos] - (gp.rho * gp.v[i] * gp.v[j] + gp.p[i][j])).abs() < 1e-12);
        }
    }
    assert_eq!(flux, gaussian_flux_10(&gp));
}

#[test]
fn non_positive_pressure_is_rejected() {
    let gas = GasModel::default();
    let mut gp = sheared();
    gp.p[0][1] = 2.0;
    gp.p[1][0] = 2.0;
    assert!(gaussian_closure_10(gp, &gas).is_err());
    assert!(maxwellian(1.0, [0.0; 3], -1.0, &gas).is_err());
}

#[test]
fn linearized_closure_at_equilibrium_is_the_maxwellian() {
    let gas = GasModel::default();
    let eq = EquilibriumState { rho: 1.2, v: [0.1, 0.2, -0.3], t: 0.9 };
    let fe = maxwellian(eq.rho, eq.v, eq.t, &gas).unwrap();
    let basis = MomentBasis::grad13();
    let q = Quadrature::new(3, 6, eq.v, chol_scale(&[[0.9, 0.0, 0.0], [0.0, 0.9, 0.0], [0.0, 0.0, 0.9]], 1.0), None, &gas)
        .unwrap();
    let u = compute_moments(|x, e| fe.value(x, e), &basis, &q, &gas).unwrap();
    let lc = linearized_closure(eq, &u, &gas).unwrap();
    assert!(lc.departure < 1e-12, "{}", lc.departure);
    assert!(!lc.far_from_equilibrium && !lc.negative_somewhere);
    for i in 0..3 {
        for (k, e) in basis.elements.iter().enumerate() {
            let direct = {
                let mut s = 0.0;
                for n in &q.nodes {
                    s += gas.m * n.weight * fe.value(&n.xi, 0.0) * n.xi[i] * e.eval(&n.xi, 0.0, gas.m);
                }
                s
            };
            assert!((lc.fluxes[i][k] - direct).abs() < 1e-11, "{} dir {i}", e.label());
        }
    }
}

#[test]
fn polytropic_internal_temperature_and_normalization() {
    let gas = GasModel::default();
    let eos = PolyatomicEos::polytropic(5.0, &gas).unwrap();
    assert!((solve_ti(2.0, 0.1, &eos).unwrap() - 1.7).abs() < 1e-12);
    assert_eq!(solve_ti(1.3, 0.0, &eos).unwrap(), 1.3);
    assert!(matches!(solve_ti(1.0, 1.0, &eos), Err(Error::OutOfBounds(_))));
    // eps^I = T for D = 5, so A = A0 (T^I / T_ref)^(m/kB).
    for ti in [0.3, 1.0, 2.5] {
        let a = normalization_a(ti, &eos, 1.0, 2.0).unwrap();
        assert!((a - 2.0 * ti).abs() < 1e-12 * a, "{ti}: {a}");
    }
}

#[test]
fn eleven_moment_gaussian_moments() {
    let base = GasModel::default();
    let eos = PolyatomicEos::polytropic(7.0, &base).unwrap();
    let gas = eos.gas_model(&base).unwrap();
    let gp = sheared();
    let t_i = 0.7;
    let f = ellipsoidal_gaussian_11(gp.rho, gp.v, gp.p, t_i, &eos, &gas).unwrap();
    let basis = MomentBasis::full(2, PhaseSpace::ClassicalWithInternalEnergy);
    let q = Quadrature::new(3, 5, gp.v, chol_scale(&gp.p, gp.rho), Some((6, t_i)), &gas).unwrap();
    let m = compute_moments(|x, e| f.value(x, e), &basis, &q, &gas).unwrap();
    let tr: f64 = (0..3).map(|i| gp.p[i][i]).sum();
    let v2: f64 = gp.v.iter().map(|x| x * x).sum();
    // 2 rho eps^I(T^I) = (D - 3) rho (kB/m) T^I
    let g_ll = gp.rho * v2 + tr + 4.0 * gp.rho * gas.r() * t_i;
    let pos = basis.position(&Moment::Energy(MultiIndex::ZERO)).unwrap();
    assert!((m.values[0] - gp.rho).abs() < 1e-12);
    assert!((m.values[pos] - g_ll).abs() < 1e-11, "{} vs {g_ll}", m.values[pos]);
}

#[test]
fn six_moment_kinetic_temperature() {
    let base = GasModel::default();
    let eos = PolyatomicEos::polytropic(5.0, &base).unwrap();
    let gas = eos.gas_model(&base).unwrap();
    let f = polyatomic_f6(1.0, [0.0; 3], 1.0, 0.25, &eos, &gas).unwrap();
    assert!((f.kinetic_temperature(&gas) - 1.25).abs() < 1e-14);
    assert!(polyatomic_f6(1.0, [0.0; 3], 1.0, -1.0, &eos, &gas).is_err());
    assert!(polyatomic_f6(1.0, [0.0; 3], 1.0, 2.0 / 3.0, &eos, &gas).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_flux_is_symmetric_and_galilean(
        rho in 0.2f64..3.0,
        v in proptest::array::uniform3(-2.0f64..2.0),
        d in proptest::array::uniform3(0.2f64..2.0),
        off in proptest::array::uniform3(-0.1f64..0.1),
    ) {
        let p = [[d[0], off[0], off[1]], [off[0], d[1], off[2]], [off[1], off[2], d[2]]];
        let f = gaussian_flux_10(&GaussianParams { rho, v, p });
        let f0 = gaussian_flux_10(&GaussianParams { rho, v: [0.0; 3], p });
        let tol = 1e-14 * f.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    prop_assert!((f[i][j][k] - f[j][i][k]).abs() <= tol);
                    prop_assert!((f[i][j][k] - f[k][j][i]).abs() <= tol);
                    // the centred third moment of a Gaussian vanishes
                    prop_assert_eq!(f0[i][j][k], 0.0);
                }
            }
        }
    }

    #[test]
    fn solve_ti_inverts_the_energy_balance(pi_p in -0.95f64..1.3, t in 0.2f64..5.0) {
        let gas = GasModel::default();
        let eos = PolyatomicEos::polytropic(8.0, &gas).unwrap();
        let ti = solve_ti(t, pi_p, &eos).unwrap();
        let res = eos.eps_i(t) - eos.eps_i(ti) - pi_p * eos.eps_k(t);
        prop_assert!(res.abs() < 1e-12 * eos.eps_k(t));
        prop_assert!(ti > 0.0);
    }
}
