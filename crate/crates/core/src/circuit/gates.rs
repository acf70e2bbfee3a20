use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{CircuitState, ColoredOracle};
use crate::oracle::Color;

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);

/// How [`apply_exp_t_with`] realizes `e^{-iTt}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExpTMethod {
    /// `W` on every `(a_l, b_l)` pair, parity into the ancilla, a phase on
    /// the ancilla controlled on `r = 0`, then uncomputation. The circuit is
    /// block diagonal in `r` and its `r = 1` block is `W X X W = 1`, so that
    /// block is passed through untouched and stays exact.
    #[default]
    Gates,
    /// `cos t |a,b,0> - i sin t |b,a,0>` on `r = 0`, identity on `r = 1`
    /// (with the ancilla set the sign of `t` flips, as in the gate route).
    ClosedForm,
}

/// `W` in the basis `|00>, |01>, |10>, |11>` (first bit is the `a` qubit).
/// Real and self-inverse; it maps the symmetric pair state to `|01>` and the
/// antisymmetric one to `|10>`.
pub fn w_matrix() -> [[C; 4]; 4] {
    let h = C::new(FRAC_1_SQRT_2, 0.0);
    let one = C::new(1.0, 0.0);
    [
        [one, ZERO, ZERO, ZERO],
        [ZERO, h, h, ZERO],
        [ZERO, h, -h, ZERO],
        [ZERO, ZERO, ZERO, one],
    ]
}

/// Apply a 4x4 unitary to qubits `(q1, q2)`; local index is `2*bit(q1) + bit(q2)`.
pub fn apply_two_qubit(state: &mut CircuitState, q1: u32, q2: u32, m: &[[C; 4]; 4]) {
    debug_assert_ne!(q1, q2);
    let (m1, m2) = (1u64 << q1, 1u64 << q2);
    let mut groups: BTreeMap<u64, [C; 4]> = BTreeMap::new();
    for (k, a) in state.iter() {
        let local = 2 * usize::from(k & m1 != 0) + usize::from(k & m2 != 0);
        groups.entry(k & !(m1 | m2)).or_insert([ZERO; 4])[local] = a;
    }
    let mut out = BTreeMap::new();
    for (base, v) in groups {
        for (i, row) in m.iter().enumerate() {
            let z: C = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            if z.norm() > super::state::PRUNE {
                let k = base | if i & 2 != 0 { m1 } else { 0 } | if i & 1 != 0 { m2 } else { 0 };
                out.insert(k, z);
            }
        }
    }
    state.replace(out);
}

/// `W` on every pair `(a_l, b_l)`.
pub fn apply_w(state: &mut CircuitState) {
    let layout = state.layout();
    let w = w_matrix();
    for l in 0..layout.width() {
        apply_two_qubit(state, layout.a_qubit(l), layout.b_qubit(l), &w);
    }
}

/// Flip `target` when every control qubit equals its polarity
/// (`true` is a filled circle, `false` an open one).
pub fn apply_controlled_x(state: &mut CircuitState, controls: &[(u32, bool)], target: u32) {
    let fire = |k: u64| controls.iter().all(|&(q, p)| ((k >> q) & 1 == 1) == p);
    permute(state, |k| if fire(k) { k ^ (1 << target) } else { k });
}

/// `e^{-iZt}` on the ancilla, controlled on `r = 0` (open circle).
pub fn apply_phase_on_ancilla(state: &mut CircuitState, t: f64) {
    let layout = state.layout();
    let (rq, aq) = (layout.r_qubit(), layout.ancilla_qubit());
    let down = C::from_polar(1.0, -t);
    let up = C::from_polar(1.0, t);
    for (k, z) in state.map_mut().iter_mut() {
        if (k >> rq) & 1 == 0 {
            *z *= if (k >> aq) & 1 == 0 { down } else { up };
        }
    }
}

pub fn apply_exp_t(state: &mut CircuitState, t: f64) {
    apply_exp_t_with(state, t, ExpTMethod::Gates)
}

pub fn apply_exp_t_with(state: &mut CircuitState, t: f64, method: ExpTMethod) {
    let layout = state.layout();
    match method {
        ExpTMethod::Gates => {
            let rq = layout.r_qubit();
            let idle: Vec<(u64, C)> = state.iter().filter(|(k, _)| (k >> rq) & 1 == 1).collect();
            state.map_mut().retain(|k, _| (k >> rq) & 1 == 0);
            apply_w(state);
            let toffolis: Vec<_> = (0..layout.width())
                .map(|l| [(layout.a_qubit(l), true), (layout.b_qubit(l), false)])
                .collect();
            for c in &toffolis {
                apply_controlled_x(state, c, layout.ancilla_qubit());
            }
            apply_phase_on_ancilla(state, t);
            for c in toffolis.iter().rev() {
                apply_controlled_x(state, c, layout.ancilla_qubit());
            }
            apply_w(state);
            state.map_mut().extend(idle);
        }
        ExpTMethod::ClosedForm => {
            let mut out: BTreeMap<u64, C> = BTreeMap::new();
            for (k, z) in state.iter() {
                let (a, b, r, anc) = layout.split(k);
                if r {
                    *out.entry(k).or_default() += z;
                    continue;
                }
                let s = if anc { -t.sin() } else { t.sin() };
                *out.entry(k).or_default() += z * t.cos();
                *out.entry(layout.index(b, a, r, anc)).or_default() += z * C::new(0.0, -s);
            }
            state.replace(out);
            state.prune();
        }
    }
}

/// The bare operator `T`: swaps `a` and `b` on `r = 0`, annihilates `r = 1`.
pub fn apply_t(state: &mut CircuitState) {
    let layout = state.layout();
    let out = state
        .iter()
        .filter_map(|(k, z)| {
            let (a, b, r, anc) = layout.split(k);
            (!r).then(|| (layout.index(b, a, r, anc), z))
        })
        .collect();
    state.replace(out);
}

/// `V_c |a,b,r> = |a, b ^ v_c(a), r ^ f_c(a)>`. One oracle query.
pub fn apply_vc<O: ColoredOracle + ?Sized>(state: &mut CircuitState, oracle: &O, c: Color) {
    oracle.record_query();
    let layout = state.layout();
    let invalid = layout.name_mask();
    permute(state, |k| {
        let (a, b, r, anc) = layout.split(k);
        let v = oracle.lookup(a, c);
        layout.index(a, b ^ v, r ^ (v == invalid), anc)
    });
}

/// Relabel basis states by a bijection.
fn permute(state: &mut CircuitState, f: impl Fn(u64) -> u64) {
    let out: BTreeMap<u64, C> = state.iter().map(|(k, z)| (f(k), z)).collect();
    debug_assert_eq!(out.len(), state.support());
    state.replace(out);
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::circuit::RegisterLayout;
    use crate::oracle::{GluedTrees, OracleHandle, VertexName};

    fn random_state(layout: RegisterLayout, seed: u64, ancilla: bool) -> CircuitState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 1u64 << (2 * layout.width() + 1);
        let anc = if ancilla {
            1 << layout.ancilla_qubit()
        } else {
            0
        };
        let v: Vec<(u64, C)> = (0..dim)
            .map(|k| {
                (
                    k | anc,
                    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let n = v.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt();
        CircuitState::from_amplitudes(layout, v.into_iter().map(|(k, z)| (k, z / n)))
    }

    /// Hand-built `T` on `(a, b, r)` for width `w`, index `a | b<<w | r<<2w`.
    fn dense_t(w: u32) -> DMatrix<f64> {
        let dim = 1usize << (2 * w + 1);
        let mask = (1usize << w) - 1;
        let mut t = DMatrix::zeros(dim, dim);
        for k in 0..dim >> 1 {
            let (a, b) = (k & mask, k >> w);
            t[(b | a << w, k)] = 1.0;
        }
        t
    }

    fn dense_exp(t_op: &DMatrix<f64>, t: f64) -> DMatrix<C> {
        let eig = t_op.clone().symmetric_eigen();
        let v = eig.eigenvectors.map(|x| C::new(x, 0.0));
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C::from_polar(1.0, -l * t)));
        &v * d * v.adjoint()
    }

    #[test]
    fn w_maps_pair_states() {
        let l = RegisterLayout::new(1).unwrap();
        let h = FRAC_1_SQRT_2;
        let (s01, s10) = (l.index(0, 1, false, false), l.index(1, 0, false, false));
        let sym = CircuitState::from_amplitudes(l, [(s01, C::new(h, 0.0)), (s10, C::new(h, 0.0))]);
        let anti =
            CircuitState::from_amplitudes(l, [(s01, C::new(h, 0.0)), (s10, C::new(-h, 0.0))]);
        let mut x = sym.clone();
        apply_w(&mut x);
        assert!(x.distance(&CircuitState::basis(l, s01)) < 1e-15);
        let mut y = anti.clone();
        apply_w(&mut y);
        assert!(y.distance(&CircuitState::basis(l, s10)) < 1e-15);
    }

    #[test]
    fn t_is_symmetric_swap() {
        let t = dense_t(2);
        assert_eq!(t.clone(), t.transpose());
        let t2 = &t * &t;
        for k in 0..t.nrows() {
            assert_eq!(t2[(k, k)], if k < t.nrows() / 2 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn exp_t_matches_dense_at_width_two() {
        let l = RegisterLayout::new(2).unwrap();
        let t_op = dense_t(2);
        for (i, t) in [0.3, std::f64::consts::FRAC_PI_2, 2.0, -1.1]
            .into_iter()
            .enumerate()
        {
            let u = dense_exp(&t_op, t);
            for seed in 0..10 {
                let psi = random_state(l, 100 * i as u64 + seed, false);
                let dense: Vec<C> = psi.to_dense().unwrap()[..1 << 5].to_vec();
                let want = &u * nalgebra::DVector::from_vec(dense);
                let want = CircuitState::from_amplitudes(
                    l,
                    want.iter().enumerate().map(|(k, &z)| (k as u64, z)),
                );
                for m in [ExpTMethod::Gates, ExpTMethod::ClosedForm] {
                    let mut got = psi.clone();
                    apply_exp_t_with(&mut got, t, m);
                    assert!(
                        got.distance(&want) < 1e-12,
                        "{m:?} t={t}: {}",
                        got.distance(&want)
                    );
                }
            }
        }
    }

    #[test]
    fn r_one_sector_is_fixed_and_ancilla_returns() {
        let l = RegisterLayout::new(3).unwrap();
        for (a, b) in [(0, 0), (5, 2), (7, 7)] {
            let k = l.index(a, b, true, false);
            let mut s = CircuitState::basis(l, k);
            apply_exp_t(&mut s, 0.77);
            assert_eq!(s, CircuitState::basis(l, k));
            let mut s = CircuitState::basis(l, l.index(a, b, false, false));
            apply_exp_t(&mut s, 0.77);
            assert!(s.iter().all(|(k, _)| !l.split(k).3));
        }
    }

    #[test]
    fn ancilla_set_runs_backwards() {
        let l = RegisterLayout::new(2).unwrap();
        for seed in 0..5 {
            let psi = random_state(l, seed, true);
            let mut g = psi.clone();
            apply_exp_t_with(&mut g, 0.9, ExpTMethod::Gates);
            let mut c = psi.clone();
            apply_exp_t_with(&mut c, 0.9, ExpTMethod::ClosedForm);
            assert!(g.distance(&c) < 1e-12);
        }
    }

    #[test]
    fn plus_one_eigenvectors_flip_at_pi() {
        let l = RegisterLayout::new(2).unwrap();
        let h = C::new(FRAC_1_SQRT_2, 0.0);
        for (a, b) in [(0, 1), (2, 3), (1, 2)] {
            let s = CircuitState::from_amplitudes(
                l,
                [
                    (l.index(a, b, false, false), h),
                    (l.index(b, a, false, false), h),
                ],
            );
            let mut x = s.clone();
            apply_exp_t(&mut x, std::f64::consts::PI);
            let neg = CircuitState::from_amplitudes(l, s.iter().map(|(k, z)| (k, -z)));
            assert!(x.distance(&neg) < 1e-12);
        }
        let diag = CircuitState::vertex(l, 0);
        let mut x = diag.clone();
        apply_exp_t(&mut x, std::f64::consts::PI);
        assert!((x.vertex_amplitude(0) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn vc_examples() {
        let g = Arc::new(GluedTrees::standard(3, 5).unwrap());
        let o = OracleHandle::new(g).unwrap();
        let l = RegisterLayout::new(o.name_width()).unwrap();
        let a = o.entrance_name().bits();
        for c in Color::all() {
            let mut s = CircuitState::vertex(l, a);
            apply_vc(&mut s, &o, c);
            let v = o
                .query_colored(VertexName::new(a, l.width()).unwrap(), c)
                .unwrap();
            let want = if v.is_invalid() {
                l.index(a, l.name_mask(), true, false)
            } else {
                l.index(a, v.bits(), false, false)
            };
            assert_eq!(s, CircuitState::basis(l, want));
            apply_vc(&mut s, &o, c);
            assert_eq!(s, CircuitState::vertex(l, a));
        }
    }

    proptest! {
        #[test]
        fn exp_t_semigroup_and_unitary(seed in 0u64..1000, t in -3.0f64..3.0, s in -3.0f64..3.0) {
            let l = RegisterLayout::new(2).unwrap();
            let psi = random_state(l, seed, false);
            let mut a = psi.clone();
            apply_exp_t(&mut a, t);
            prop_assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
            apply_exp_t(&mut a, s);
            let mut b = psi.clone();
            apply_exp_t(&mut b, t + s);
            prop_assert!(a.distance(&b) < 1e-10);
        }

        #[test]
        fn vc_is_involution_on_any_basis_state(seed in 0u64..50, k in 0u64..(1 << 10), c in 0usize..9) {
            let g = Arc::new(GluedTrees::standard(2, seed).unwrap());
            let o = OracleHandle::new(g).unwrap();
            let l = RegisterLayout::new(o.name_width()).unwrap();
            let c = Color::from_index(c).unwrap();
            let mut s = CircuitState::basis(l, k);
            apply_vc(&mut s, &o, c);
            apply_vc(&mut s, &o, c);
            prop_assert_eq!(s, CircuitState::basis(l, k));
        }
    }
}
