use std::f64::consts::PI;
use std::sync::Mutex;

use wedgebound_core::density::{quadrature_density, Estimator, Executor, Moments, QuadratureGrid, Sequential};
use wedgebound_core::geometry::{wedge_domain, WedgeConfig};
use wedgebound_core::Dimension;

fn dim(d: usize) -> Dimension {
    Dimension::new(d).unwrap()
}

/// Regular-simplex oracles: the hexagonal density in the plane, and the
/// spherical excess of the regular tetrahedron's vertex angle.
fn sigma2() -> f64 {
    PI / (2.0 * 3f64.sqrt())
}

fn sigma3() -> f64 {
    (4.0 * (3.0 * (1.0f64 / 3.0).acos() - PI) / 3.0) / (2.0 * 2f64.sqrt() / 3.0)
}

/// Runs tasks on scoped threads, finishing them in reverse order.
struct Threads(usize);

impl Executor for Threads {
    fn map(&self, tasks: usize, f: &(dyn Fn(usize) -> Vec<Moments> + Sync)) -> Vec<Vec<Moments>> {
        let slots: Vec<Mutex<Vec<Moments>>> = (0..tasks).map(|_| Mutex::new(Vec::new())).collect();
        std::thread::scope(|s| {
            for w in 0..self.0 {
                let slots = &slots;
                s.spawn(move || {
                    for i in (0..tasks).rev().filter(|i| i % self.0 == w) {
                        *slots[i].lock().unwrap() = f(i);
                    }
                });
            }
        });
        slots.into_iter().map(|m| m.into_inner().unwrap()).collect()
    }
}

#[test]
fn anchors_hold_across_seeds() {
    let mut misses = 0;
    for seed in 0..20 {
        let est = Estimator::new(1_000_000, seed);
        for (d, want) in [(2, sigma2()), (3, sigma3())] {
            let e = est.sigma(dim(d)).unwrap();
            assert!(e.stderr <= 2e-4);
            if (e.value - want).abs() > 3.0 * e.stderr {
                misses += 1;
            }
        }
    }
    // 40 trials at a 0.27% miss rate
    assert!(misses <= 3, "{misses} misses");
}

#[test]
fn executors_agree_bit_for_bit() {
    let d = dim(8);
    let cfg = WedgeConfig::canonical_wedge(d, wedge_domain(d).unwrap()).unwrap();
    let seq = Estimator::new(300_000, 5)
        .with_executor(&Sequential)
        .surface_density(&cfg)
        .unwrap();
    for workers in [1, 3, 8] {
        let ex = Threads(workers);
        let par = Estimator::new(300_000, 5)
            .with_executor(&ex)
            .surface_density(&cfg)
            .unwrap();
        assert_eq!(seq, par, "{workers} workers");
    }
    let b1 = Estimator::new(100_000, 9).bound_set(d).unwrap();
    let b2 = Estimator::new(100_000, 9)
        .with_executor(&Threads(4))
        .bound_set(d)
        .unwrap();
    assert_eq!(b1, b2);
    assert_ne!(seq, Estimator::new(300_000, 6).surface_density(&cfg).unwrap());
}

#[test]
fn stderr_scales_as_inverse_root_n() {
    let d = dim(6);
    let cfg = WedgeConfig::canonical_simplex(d).unwrap();
    let ns = [10_000u64, 100_000, 1_000_000, 10_000_000];
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            let e = Estimator::new(n, 3).surface_density(&cfg).unwrap();
            ((n as f64).ln(), e.stderr.ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
    let slope =
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() <= 0.05, "slope {slope}");
}

#[test]
fn densities_lie_in_the_unit_interval() {
    let est = Estimator::new(100_000, 1);
    for d in 4..=20 {
        let b = est.bound_set(dim(d)).unwrap();
        for e in [b.sigma, b.sigma_hat, b.lambda] {
            assert!(e.value > 0.0 && e.value < 1.0, "d = {d}: {e:?}");
            assert!(e.stderr.is_finite() && e.stderr > 0.0);
        }
    }
}

#[test]
fn combination_identity_and_improvement() {
    let est = Estimator::new(1_000_000, 11);
    for d in [4, 6, 8, 10, 12] {
        let b = est.bound_set(dim(d)).unwrap();
        assert!(
            b.combination.value.abs() <= 3.0 * b.combination.stderr,
            "d = {d}: {:?}",
            b.combination
        );
        if d >= 8 {
            assert!(b.gap.value > 5.0 * b.gap.stderr, "d = {d}: {:?}", b.gap);
            assert!(b.lambda_gap.value > 5.0 * b.lambda_gap.stderr);
        }
    }
}

#[test]
fn quadrature_matches_monte_carlo() {
    let est = Estimator::new(400_000, 17);
    let grid = QuadratureGrid::default();
    let mut configs = Vec::new();
    for d in 2..=10 {
        configs.push(WedgeConfig::canonical_simplex(dim(d)).unwrap());
    }
    for d in 4..=10 {
        configs.push(WedgeConfig::canonical_wedge(dim(d), wedge_domain(dim(d)).unwrap()).unwrap());
    }
    for cfg in configs {
        let q = quadrature_density(&cfg, grid).unwrap();
        let m = est.surface_density(&cfg).unwrap();
        let tol = 3.0 * q.combined_stderr(&m);
        assert!(
            (q.value - m.value).abs() <= tol,
            "d = {}: {} vs {}",
            cfg.dim(),
            q.value,
            m.value
        );
    }
}
