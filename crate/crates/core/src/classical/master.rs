use crate::oracle::{GluedTrees, GraphKind};
use crate::{Error, Result};

/// Generator `K` of the continuous-time random walk: `K_ab = gamma` on
/// edges, `-d(a) gamma` on the diagonal. Stored by row; columns sum to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalGenerator {
    rows: Vec<Vec<(usize, f64)>>,
}

impl ClassicalGenerator {
    /// From explicit off-diagonal rates `(to, from, rate)`; the diagonal is
    /// filled so every column sums to zero.
    pub fn from_rates(
        dim: usize,
        rates: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut rows = vec![Vec::new(); dim];
        let mut out = vec![0.0; dim];
        for (to, from, r) in rates {
            if to >= dim || from >= dim || to == from || !(r >= 0.0 && r.is_finite()) {
                return Err(Error::param(
                    "rates",
                    format!("bad rate {r} for {from} -> {to}"),
                ));
            }
            rows[to].push((from, r));
            out[from] += r;
        }
        for (a, row) in rows.iter_mut().enumerate() {
            row.push((a, -out[a]));
            row.sort_by_key(|e| e.0);
        }
        Ok(ClassicalGenerator { rows })
    }

    pub fn from_graph(graph: &GluedTrees, gamma: f64) -> Result<Self> {
        let rates = graph.edges().iter().flat_map(|&(u, v)| {
            let (u, v) = (u as usize, v as usize);
            [(u, v, gamma), (v, u, gamma)]
        });
        Self::from_rates(graph.vertex_count(), rates)
    }

    /// Column-lumped walk on `G'_n`: total probability per column is itself
    /// a birth-death chain because every vertex of a column has the same
    /// numbers of left and right neighbors.
    pub fn column_chain(n: u32, gamma: f64) -> Result<Self> {
        let kind = GraphKind::RandomCycle;
        let last = kind.column_count(n) as usize - 1;
        let mut rates = Vec::new();
        for j in 0..=last {
            let (left, right) = column_degrees(n, j);
            if right > 0 {
                rates.push((j + 1, j, right as f64 * gamma));
            }
            if left > 0 {
                rates.push((j - 1, j, left as f64 * gamma));
            }
        }
        Self::from_rates(last + 1, rates)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.dim()];
        for row in &self.rows {
            for &(b, k) in row {
                s[b] += k;
            }
        }
        s
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(b, k)| k * p[b]).sum())
            .collect()
    }

    fn max_exit_rate(&self) -> f64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(a, row)| -row.iter().find(|e| e.0 == a).map_or(0.0, |e| e.1))
            .fold(0.0, f64::max)
    }
}

/// Neighbors of a column-`j` vertex of `G'_n` in columns `j-1` and `j+1`.
fn column_degrees(n: u32, j: usize) -> (u32, u32) {
    let n = n as usize;
    let last = 2 * n + 1;
    match j {
        0 => (0, 2),
        j if j == last => (2, 0),
        j if j <= n => (1, 2),
        _ => (2, 1),
    }
}

/// `p(t) = e^{Kt} p0` by uniformization: with `P = 1 + K/L`,
/// `e^{Kt} = sum_k Poisson(k; Lt) P^k`. `P` is stochastic, so every term is
/// nonnegative. Poisson weights are built outward from the mode and
/// normalized, which avoids underflow of `e^{-Lt}`.
pub fn classical_master_evolve(k: &ClassicalGenerator, p0: &[f64], t: f64) -> Result<Vec<f64>> {
    if p0.len() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: p0.len(),
        });
    }
    let total: f64 = p0.iter().sum();
    if p0.iter().any(|&x| !(x >= 0.0)) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::param("p0", "not a probability distribution"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param(
            "t",
            format!("{t} must be finite and nonnegative"),
        ));
    }
    let rate = k.max_exit_rate();
    let lt = rate * t;
    if lt == 0.0 {
        return Ok(p0.to_vec());
    }
    let mode = lt.floor() as usize;
    let spread = 12.0 * lt.sqrt() + 30.0;
    let lo = (lt - spread).max(0.0) as usize;
    let hi = (lt + spread) as usize + 1;
    let mut w = vec![0.0; hi - lo + 1];
    w[mode - lo] = 1.0;
    for i in mode + 1..=hi {
        w[i - lo] = w[i - 1 - lo] * lt / i as f64;
    }
    for i in (lo..mode).rev() {
        w[i - lo] = w[i + 1 - lo] * (i + 1) as f64 / lt;
    }
    let norm: f64 = w.iter().sum();

    let mut v = p0.to_vec();
    let mut out = vec![0.0; k.dim()];
    for i in 0..=hi {
        if i >= lo {
            let c = w[i - lo] / norm;
            out.iter_mut().zip(&v).for_each(|(o, x)| *o += c * x);
        }
        let kv = k.apply(&v);
        v.iter_mut()
            .zip(kv)
            .for_each(|(x, d)| *x = (*x + d / rate).max(0.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    use super::*;

    fn dense(k: &ClassicalGenerator) -> DMatrix<f64> {
        let d = k.dim();
        let mut m = DMatrix::zeros(d, d);
        for (a, row) in k.rows.iter().enumerate() {
            for &(b, x) in row {
                m[(a, b)] = x;
            }
        }
        m
    }

    #[test]
    fn single_edge_closed_form() {
        let k = ClassicalGenerator::from_rates(2, [(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        for t in [0.0, 0.1, 1.0, 5.0] {
            let p = classical_master_evolve(&k, &[1.0, 0.0], t).unwrap();
            let e = (-2.0 * t).exp();
            assert!(
                (p[0] - (1.0 + e) / 2.0).abs() < 1e-12 && (p[1] - (1.0 - e) / 2.0).abs() < 1e-12
            );
        }
    }

    #[test]
    fn graph_generator_matches_symmetric_eigen_route() {
        let g = GluedTrees::generate(GraphKind::RandomCycle, 3, 4).unwrap();
        let k = ClassicalGenerator::from_graph(&g, 0.7).unwrap();
        assert!(k.column_sums().iter().all(|s| s.abs() < 1e-15));
        let eig = dense(&k).symmetric_eigen();
        let mut p0 = vec![0.0; k.dim()];
        p0[0] = 1.0;
        for t in [0.5, 3.0, 20.0] {
            let want = &eig.eigenvectors
                * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (l * t).exp()))
                * eig.eigenvectors.transpose()
                * DVector::from_vec(p0.clone());
            let got = classical_master_evolve(&k, &p0, t).unwrap();
            for (a, b) in got.iter().zip(want.iter()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn column_chain_is_the_lumped_graph_walk() {
        let n = 4;
        let g = GluedTrees::generate(GraphKind::RandomCycle, n, 9).unwrap();
        let kg = ClassicalGenerator::from_graph(&g, 1.0).unwrap();
        let kc = ClassicalGenerator::column_chain(n, 1.0).unwrap();
        let mut p0 = vec![0.0; kg.dim()];
        p0[0] = 1.0;
        let mut c0 = vec![0.0; kc.dim()];
        c0[0] = 1.0;
        for t in [1.0, 7.5] {
            let pg = classical_master_evolve(&kg, &p0, t).unwrap();
            let pc = classical_master_evolve(&kc, &c0, t).unwrap();
            for j in 0..kc.dim() as u32 {
                let lumped: f64 = g.column_range(j).map(|v| pg[v as usize]).sum();
                assert!((lumped - pc[j as usize]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exit_column_stays_exponentially_small() {
        let n = 20;
        let k = ClassicalGenerator::column_chain(n, 1.0).unwrap();
        let mut p0 = vec![0.0; k.dim()];
        p0[0] = 1.0;
        let p = classical_master_evolve(&k, &p0, 1e4).unwrap();
        assert!(
            p[k.dim() - 1] < 2f64.powf(-(n as f64) / 2.0),
            "{}",
            p[k.dim() - 1]
        );
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bad_inputs() {
        let k = ClassicalGenerator::column_chain(2, 1.0).unwrap();
        assert!(classical_master_evolve(&k, &[1.0], 1.0).is_err());
        assert!(classical_master_evolve(&k, &[0.5, 0.0, 0.0, 0.0, 0.0, 0.0], 1.0).is_err());
        assert_eq!(
            classical_master_evolve(&k, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap()[1],
            1.0
        );
    }

    proptest! {
        #[test]
        fn preserves_probability(n in 1u32..8, t in 0.0f64..50.0, start in 0usize..4) {
            let k = ClassicalGenerator::column_chain(n, 1.0).unwrap();
            let mut p0 = vec![0.0; k.dim()];
            p0[start.min(k.dim() - 1)] = 1.0;
            let p = classical_master_evolve(&k, &p0, t).unwrap();
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
}
