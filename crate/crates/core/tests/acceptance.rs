//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits 0 even when a criterion fails so the rest of `cargo test` keeps
//! running; set `ACCEPTANCE_STRICT=1` for a nonzero status on any failure.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use gluedwalk::circuit::{apply_exp_t, CircuitState, RegisterLayout};
use gluedwalk::classical::{
    check_cycle_rule, check_made_up_colors, check_restriction, replay_check, AdversaryKind,
};
use gluedwalk::harness::{run, ExperimentConfig, ExperimentKind, ResultRecord};
use gluedwalk::linalg::EigenSystem;
use gluedwalk::line::{
    finite_line_auto, infinite_line, quantization_roots, reflection, transmission,
    transmission_probability, wavepacket_scatter, PacketSpec, StateKind,
};
use gluedwalk::oracle::{Color, GluedTrees, OracleHandle, ReplyMode, VertexName};
use gluedwalk::walk::{
    exit_amplitudes, lemma1_average, lemma_tau, theorem_tau, Basis, ColumnChain, Method,
    Propagator, StateVector, WalkHamiltonian,
};
use gluedwalk::Complex64;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn record_outcome(r: &ResultRecord) -> Outcome {
    let failed: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.describe())
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} checks", r.checks.len()))
}

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn dense_spectrum(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn spectrum_n5() -> Outcome {
    let r = quantization_roots(5).map_err(|e| e.to_string())?;
    let band = r
        .states
        .iter()
        .filter(|s| matches!(s.kind, StateKind::Band { .. }))
        .count();
    let bound = r.states.len() - band;
    ensure(band == 8 && bound == 2, || {
        format!("{band} band states, {bound} bound states")
    })?;
    let dense = dense_spectrum(ColumnChain::lemma_chain(5).to_dense());
    let err = r
        .energies()
        .iter()
        .zip(&dense)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-10, || format!("max deviation from dense {err:e}"))?;
    Ok(format!("8 band + 2 bound, max deviation {err:.1e}"))
}

fn bound_states_n20() -> Outcome {
    let r = quantization_roots(20).map_err(|e| e.to_string())?;
    let target = SQRT_2 + FRAC_1_SQRT_2;
    let e = r.energies();
    let (lo, hi) = (e[0], e[e.len() - 1]);
    let err = (lo + target).abs().max((hi - target).abs());
    ensure(err < 1e-6, || format!("extremes {lo}, {hi}"))?;
    Ok(format!("extremes {lo:.9}, {hi:.9}"))
}

fn gap_bound() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Spectrum);
    cfg.n_range = Some([10, 200]);
    let r = run(&cfg).map_err(|e| e.to_string())?;
    // Independent route for a few sizes: dense eigenvalues of the chain.
    for n in [10u32, 57, 200] {
        let e = dense_spectrum(ColumnChain::lemma_chain(n).to_dense());
        let dense_gap = e
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let gap = quantization_roots(n)
            .map_err(|e| e.to_string())?
            .min_gap()
            .gap;
        ensure((gap - dense_gap).abs() < 1e-10, || {
            format!("n = {n}: gap {gap} vs dense {dense_gap}")
        })?;
    }
    let lower: Vec<_> = r
        .checks
        .iter()
        .filter(|c| c.name.ends_with("gap * n^3"))
        .collect();
    let window: Vec<_> = r
        .checks
        .iter()
        .filter(|c| c.name.ends_with("within [8, 9]"))
        .collect();
    let lower_fail = lower.iter().filter(|c| !c.passed).count();
    let window_fail = window.iter().filter(|c| !c.passed).count();
    let min = r.summary["min_gap_n3"];
    let last = window.last().map_or(f64::NAN, |c| c.value);
    ensure(lower_fail == 0 && window_fail == 0 && r.passed(), || {
        format!(
            "gap*n^3 > 8 fails for {lower_fail} of {} n (min {min:.3}); gap*n^3 in [8, 9] fails for {window_fail} of {} n >= 100 (n = 200: {last:.3})",
            lower.len(),
            window.len()
        )
    })?;
    Ok(format!("min gap*n^3 = {min:.3}"))
}

fn hitting_bound() -> Outcome {
    let mut checked = 0;
    let mut worst = f64::INFINITY;
    for eps in [0.1, 0.5] {
        for n in 2..=40u32 {
            let tau = lemma_tau(n, eps).map_err(|e| e.to_string())?;
            let r = lemma1_average(n, eps, tau).map_err(|e| e.to_string())?;
            ensure(r.probability > r.bound, || {
                format!(
                    "lemma: n = {n}, eps = {eps}: {} <= {}",
                    r.probability, r.bound
                )
            })?;
            worst = worst.min(r.probability - r.bound);
            checked += 1;
            if n >= 4 {
                let r = lemma1_average(n, eps, theorem_tau(n, eps)).map_err(|e| e.to_string())?;
                ensure(r.probability > r.bound, || {
                    format!(
                        "theorem: n = {n}, eps = {eps}: {} <= {}",
                        r.probability, r.bound
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} inequalities, smallest lemma margin {worst:.3e}"
    ))
}

fn cross_method() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=6u32 {
        let times: Vec<f64> = (0..=4 * n).map(f64::from).collect();
        let chain = exit_amplitudes(n, FRAC_1_SQRT_2, &times).map_err(|e| e.to_string())?;
        for seed in 0..20 {
            let g = GluedTrees::standard(n, seed).map_err(|e| e.to_string())?;
            let h = WalkHamiltonian::glued(&g, FRAC_1_SQRT_2).map_err(|e| e.to_string())?;
            let prop = Propagator::new(&h, Method::Dense).map_err(|e| e.to_string())?;
            let psi0 =
                StateVector::basis_state(Basis::Vertices, g.vertex_count(), g.entrance() as usize)
                    .map_err(|e| e.to_string())?;
            for (&t, &want) in times.iter().zip(&chain) {
                let got =
                    prop.evolve(&psi0, t).map_err(|e| e.to_string())?.amplitudes[g.exit() as usize];
                worst = worst.max((got - want).norm());
            }
        }
    }
    ensure(worst < 1e-10, || {
        format!("graph vs chain exit amplitude {worst:e}")
    })?;
    let mut cfg = ExperimentConfig::new(ExperimentKind::TrotterScan);
    cfg.n_range = Some([1, 2]);
    cfg.steps = vec![125, 250, 500, 1000, 2000];
    let r = run(&cfg).map_err(|e| e.to_string())?;
    record_outcome(&r)?;
    let ratios: Vec<String> = r.checks.iter().map(|c| format!("{:.3}", c.value)).collect();
    Ok(format!(
        "graph vs chain {worst:.1e}; Trotter ratios j = 125..2000: [{}]",
        ratios.join(", ")
    ))
}

fn t_circuit() -> Outcome {
    // Width 2 is the name width of n = 1.
    let layout = RegisterLayout::new(2).map_err(|e| e.to_string())?;
    let w = 2u32;
    let dim = 1usize << (2 * w + 1);
    let mask = (1usize << w) - 1;
    // T|a, b, 0> = |b, a, 0>, T|a, b, 1> = 0; index a | b << w | r << 2w.
    let mut t_op = DMatrix::zeros(dim, dim);
    for k in 0..dim >> 1 {
        let (a, b) = (k & mask, k >> w);
        t_op[(b | a << w, k)] = 1.0;
    }
    let es = EigenSystem::symmetric(t_op).map_err(|e| e.to_string())?;
    let mut g = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = g.gen_range(-10.0..10.0);
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = amps.iter().map(|z| z / norm).collect();
        let want = es.evolve(&amps, t).map_err(|e| e.to_string())?;
        let mut state = CircuitState::from_amplitudes(
            layout,
            amps.iter().enumerate().map(|(k, &z)| {
                (
                    layout.index(
                        (k & mask) as u64,
                        ((k >> w) & mask) as u64,
                        k >> (2 * w) == 1,
                        false,
                    ),
                    z,
                )
            }),
        );
        apply_exp_t(&mut state, t);
        let got: Vec<Complex64> = (0..dim)
            .map(|k| {
                state.amplitude(layout.index(
                    (k & mask) as u64,
                    ((k >> w) & mask) as u64,
                    k >> (2 * w) == 1,
                    false,
                ))
            })
            .collect();
        let outside = state.norm_sqr() - got.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let err = got
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err).max(outside.abs());
    }
    ensure(worst < 1e-12, || {
        format!("max distance from the dense exponential {worst:e}")
    })?;
    for a in 0..4u64 {
        for b in 0..4u64 {
            let idx = layout.index(a, b, true, false);
            let mut s = CircuitState::basis(layout, idx);
            apply_exp_t(&mut s, 0.7 + a as f64 + 0.1 * b as f64);
            ensure(
                s.support() == 1 && s.amplitude(idx) == Complex64::new(1.0, 0.0),
                || format!("|{a},{b},1> moved"),
            )?;
        }
    }
    Ok(format!(
        "100 random states within {worst:.1e}; r = 1 block exact"
    ))
}

fn line_propagator() -> Outcome {
    // Truncated chain, far longer than the light cone at t = 40.
    let half = 220i64;
    let sites = (2 * half + 1) as usize;
    let chain = ColumnChain::with_defect(sites, 0, 1.0, 1.0);
    let es = EigenSystem::symmetric(chain.to_dense()).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for t in [0.5, 3.0, 11.0, 25.0, 40.0] {
        for j in -20..=20i64 {
            for k in -20..=20i64 {
                let got = es.amplitude((k + half) as usize, (j + half) as usize, t);
                worst = worst.max((got - infinite_line(j, k, t)).norm());
            }
        }
    }
    ensure(worst < 1e-8, || format!("Bessel vs chain {worst:e}"))?;
    let l = 20u32;
    let seg = EigenSystem::symmetric(ColumnChain::with_defect(l as usize, 0, 1.0, 1.0).to_dense())
        .map_err(|e| e.to_string())?;
    let mut worst_img: f64 = 0.0;
    for t in [0.5, 3.0, 11.0, 25.0, 40.0] {
        for j in 1..=l as i64 {
            for k in 1..=l as i64 {
                let got = finite_line_auto(j, k, t, l).map_err(|e| e.to_string())?;
                worst_img = worst_img
                    .max((got - seg.amplitude((k - 1) as usize, (j - 1) as usize, t)).norm());
            }
        }
    }
    ensure(worst_img < 1e-8, || {
        format!("image sum vs dense {worst_img:e}")
    })?;
    Ok(format!("Bessel {worst:.1e}, image sum {worst_img:.1e}"))
}

fn scattering() -> Outcome {
    let half = transmission_probability(PI / 2.0, SQRT_2).map_err(|e| e.to_string())?;
    ensure((half - 8.0 / 9.0).abs() < 1e-15, || {
        format!("|T(pi/2)|^2 = {half}")
    })?;
    let out = wavepacket_scatter(&PacketSpec::new(SQRT_2, PI / 2.0)).map_err(|e| e.to_string())?;
    let rel = (out.transmitted - out.predicted).abs() / out.predicted;
    ensure(rel <= 0.02, || {
        format!("packet {} vs {} ({rel:.3})", out.transmitted, out.predicted)
    })?;
    let mut g = rng(8);
    let mut defect: f64 = 0.0;
    for _ in 0..1000 {
        let p = g.gen_range(1e-3..PI - 1e-3);
        let alpha = g.gen_range(0.05..10.0);
        let t = transmission(p, alpha).map_err(|e| e.to_string())?;
        let r = reflection(p, alpha).map_err(|e| e.to_string())?;
        defect = defect.max((t.norm_sqr() + r.norm_sqr() - 1.0).abs());
    }
    ensure(defect <= 1e-12, || format!("unitarity defect {defect:e}"))?;
    Ok(format!(
        "packet {:.5} vs {:.5} ({:.2}%), unitarity {defect:.1e}",
        out.transmitted,
        out.predicted,
        100.0 * rel
    ))
}

fn classical_traversals() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::ClassicalTraversal);
    cfg.n_range = Some([1, 20]);
    cfg.trials = 1000;
    cfg.seed = 9;
    let r = run(&cfg).map_err(|e| e.to_string())?;
    record_outcome(&r)?;
    let s = &r.summary;
    Ok(format!(
        "G_n: {:.3} n^2 + {:.2} (R^2 {:.4}); hypercube: {:.3} n^2 + {:.2} (R^2 {:.4})",
        s["gn_fit_a"],
        s["gn_fit_b"],
        s["gn_fit_r2"],
        s["hypercube_fit_a"],
        s["hypercube_fit_b"],
        s["hypercube_fit_r2"]
    ))
}

fn lower_bound() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::LowerboundMc);
    cfg.n = Some(24);
    cfg.trials = 100_000;
    cfg.seed = 10;
    let r = run(&cfg).map_err(|e| e.to_string())?;
    record_outcome(&r)?;
    let worst4 = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("game 4"))
        .map(|c| c.value)
        .fold(0.0, f64::max);
    let worst5 = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("game 5"))
        .map(|c| c.value)
        .fold(0.0, f64::max);
    // Transcript-level reductions, at a depth where wins actually happen.
    let (n, budget, trials) = (8, 40, 2000);
    for kind in AdversaryKind::ALL {
        let rc = replay_check(kind, n, budget, trials, 12).map_err(|e| e.to_string())?;
        ensure(
            rc.agree == rc.trials && rc.maps_reproduced == rc.trials,
            || format!("{}: replay {rc:?}", kind.label()),
        )?;
        let cyc = check_cycle_rule(kind, n, budget, 500, 13).map_err(|e| e.to_string())?;
        ensure(cyc.violations == 0, || {
            format!("{}: {} cycle-rule violations", kind.label(), cyc.violations)
        })?;
        let res = check_restriction(kind, n, budget, 500, 14).map_err(|e| e.to_string())?;
        ensure(res.holds, || {
            format!("{}: restriction {:?}", kind.label(), res)
        })?;
        let col = check_made_up_colors(kind, n, budget, 2000, 15).map_err(|e| e.to_string())?;
        ensure(col.holds, || {
            format!("{}: made-up colors z = {}", kind.label(), col.z)
        })?;
    }
    Ok(format!("game 4 max upper {worst4:.4} <= 0.25; game 5 max upper {worst5:.4} <= 0.2075; reductions hold"))
}

fn oracle_contract() -> Outcome {
    let mut graphs = 0;
    for n in 1..=8u32 {
        for seed in 0..100u64 {
            let g = Arc::new(GluedTrees::standard(n, seed).map_err(|e| e.to_string())?);
            check_graph(&g).map_err(|e| format!("n = {n}, seed = {seed}: {e}"))?;
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs, zero violations"))
}

fn check_graph(g: &Arc<GluedTrees>) -> Result<(), String> {
    let o = OracleHandle::new(Arc::clone(g)).map_err(|e| e.to_string())?;
    let n = g.n();
    let w = o.name_width();
    let count = g.vertex_count();
    ensure(count as u64 == (1u64 << (n + 2)) - 2, || {
        format!("{count} vertices")
    })?;
    // Reserved names.
    ensure(o.entrance_name() == VertexName::zero(w), || {
        "entrance is not named 0".into()
    })?;
    let mut names = std::collections::HashSet::new();
    for v in 0..count as u32 {
        let a = g.name(v).map_err(|e| e.to_string())?;
        ensure(!a.is_invalid(), || {
            format!("vertex {v} has the reserved name")
        })?;
        ensure(names.insert(a.bits()), || format!("name {a:?} repeated"))?;
    }
    let invalid = VertexName::invalid(w);
    ensure(
        o.query_neighbors(invalid, ReplyMode::WithColors).is_empty(),
        || "reserved name has neighbors".into(),
    )?;
    // Involution and coloring consistency.
    for v in 0..count as u32 {
        let a = g.name(v).map_err(|e| e.to_string())?;
        let mut found = 0;
        let (mut letters, mut digits) = (0u8, 0u8);
        for c in Color::all() {
            let b = o.query_colored(a, c).map_err(|e| e.to_string())?;
            if b.is_invalid() {
                continue;
            }
            found += 1;
            ensure(
                o.query_colored(b, c).map_err(|e| e.to_string())? == a,
                || format!("v_c(v_c(a)) != a at {a:?}, {c:?}"),
            )?;
            letters |= 1 << c.letter();
            digits |= 1 << c.digit();
        }
        ensure(found == g.degree(v), || {
            format!(
                "vertex {v}: {found} colored edges for degree {}",
                g.degree(v)
            )
        })?;
        // Even columns choose distinct letters, odd columns distinct digits.
        let distinct = if g.column(v) % 2 == 0 {
            letters.count_ones()
        } else {
            digits.count_ones()
        };
        ensure(distinct as usize == found, || {
            format!("vertex {v}: repeated color component")
        })?;
    }
    // Degree multiset {2, 2, 3, ...}.
    let mut degrees: Vec<usize> = (0..count as u32).map(|v| g.degree(v)).collect();
    degrees.sort_unstable();
    ensure(
        degrees[..2] == [2, 2] && degrees[2..].iter().all(|&d| d == 3),
        || "degree multiset".into(),
    )?;
    ensure(
        g.degree(g.entrance()) == 2 && g.degree(g.exit()) == 2,
        || "entrance/exit degree".into(),
    )?;
    // Central edges form one cycle through all 2^{n+1} leaves, alternating sides.
    let leaves: Vec<u32> = g.column_range(n).chain(g.column_range(n + 1)).collect();
    let central: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| {
            (g.column(a), g.column(b)) == (n, n + 1) || (g.column(a), g.column(b)) == (n + 1, n)
        })
        .collect();
    ensure(central.len() == leaves.len(), || {
        format!(
            "{} central edges for {} leaves",
            central.len(),
            leaves.len()
        )
    })?;
    for (a, b) in g.edges() {
        ensure(g.column(*a).abs_diff(g.column(*b)) == 1, || {
            format!("edge {a}-{b} skips a column")
        })?;
    }
    let next = |v: u32, prev: Option<u32>| -> Option<u32> {
        g.neighbors(v).iter().copied().find(|&u| {
            g.column(u) != g.column(v)
                && g.column(u) >= n
                && g.column(v) >= n
                && g.column(u) <= n + 1
                && Some(u) != prev
        })
    };
    let start = leaves[0];
    let (mut prev, mut cur, mut len) = (None, start, 0usize);
    loop {
        let nx = next(cur, prev).ok_or("central path breaks")?;
        ensure(g.column(nx) != g.column(cur), || {
            "cycle does not alternate".into()
        })?;
        prev = Some(cur);
        cur = nx;
        len += 1;
        if cur == start || len > leaves.len() {
            break;
        }
    }
    ensure(cur == start && len == leaves.len(), || {
        format!("central cycle of length {len}, expected {}", leaves.len())
    })
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let only: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let criteria = [
        Criterion {
            id: "1",
            title: "spectrum at n = 5",
            budget: Duration::from_secs(1),
            run: spectrum_n5,
        },
        Criterion {
            id: "2",
            title: "bound states at n = 20",
            budget: Duration::from_secs(1),
            run: bound_states_n20,
        },
        Criterion {
            id: "3",
            title: "gap bound for n = 10..200",
            budget: Duration::from_secs(30),
            run: gap_bound,
        },
        Criterion {
            id: "4",
            title: "time-averaged hitting bound",
            budget: Duration::from_secs(60),
            run: hitting_bound,
        },
        Criterion {
            id: "5",
            title: "cross-method equivalence",
            budget: Duration::from_secs(600),
            run: cross_method,
        },
        Criterion {
            id: "6",
            title: "T-operator circuit",
            budget: Duration::from_secs(10),
            run: t_circuit,
        },
        Criterion {
            id: "7",
            title: "line propagator",
            budget: Duration::from_secs(30),
            run: line_propagator,
        },
        Criterion {
            id: "8",
            title: "defect scattering",
            budget: Duration::from_secs(60),
            run: scattering,
        },
        Criterion {
            id: "9",
            title: "classical traversals",
            budget: Duration::from_secs(120),
            run: classical_traversals,
        },
        Criterion {
            id: "10",
            title: "query lower bound (statistical)",
            budget: Duration::from_secs(600),
            run: lower_bound,
        },
        Criterion {
            id: "11",
            title: "oracle contract",
            budget: Duration::from_secs(60),
            run: oracle_contract,
        },
    ];
    let mut failed = Vec::new();
    for c in criteria
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|o| o == c.id))
    {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > c.budget => {
                Err(format!("{d}; runtime {elapsed:.1?} over {:?}", c.budget))
            }
            other => other,
        };
        match &outcome {
            Ok(d) => println!("PASS [{}] {} ({elapsed:.2?}): {d}", c.id, c.title),
            Err(d) => {
                println!("FAIL [{}] {} ({elapsed:.2?}): {d}", c.id, c.title);
                failed.push(c.id);
            }
        }
    }
    println!(
        "acceptance: {} failed{}",
        failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(" ({})", failed.join(", "))
        }
    );
    if !failed.is_empty() && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
