//! Composite Gauss–Legendre quadrature with adaptive panel bisection.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature on [{a}, {b}] did not reach tolerance {tol:e} (error estimate {error:e})")]
    NotConverged {
        a: f64,
        b: f64,
        error: f64,
        tol: f64,
    },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
}

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Globally adaptive composite rule over the panels delimited by
/// `breakpoints`.
///
/// The panel with the largest error estimate (rule on the panel vs. rule on
/// its halves) is bisected until the summed estimate drops below
/// `rel_tol·Σ|I_panel|`.
#[derive(Debug, Clone)]
pub struct AdaptiveQuadrature {
    rule: GaussLegendre,
    pub rel_tol: f64,
    pub max_panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

impl AdaptiveQuadrature {
    pub fn new(order: usize, rel_tol: f64) -> Self {
        Self {
            rule: GaussLegendre::new(order),
            rel_tol,
            max_panels: 200_000,
        }
    }

    fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> Result<Panel, QuadratureError> {
        let m = 0.5 * (a + b);
        let whole = self.rule.integrate(f, a, b);
        let split = self.rule.integrate(f, a, m) + self.rule.integrate(f, m, b);
        if !split.is_finite() || !whole.is_finite() {
            return Err(QuadratureError::NonFinite(m));
        }
        Ok(Panel {
            a,
            b,
            value: split,
            error: (split - whole).abs(),
        })
    }

    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        breakpoints: &[f64],
    ) -> Result<f64, QuadratureError> {
        assert!(breakpoints.len() >= 2, "need at least one panel");
        let mut heap = BinaryHeap::new();
        for w in breakpoints.windows(2) {
            heap.push(self.panel(f, w[0], w[1])?);
        }
        let mut scale: f64 = heap.iter().map(|p| p.value.abs()).sum();
        let mut error: f64 = heap.iter().map(|p| p.error).sum();
        loop {
            let tol = self.rel_tol * scale.max(f64::MIN_POSITIVE);
            if error <= tol {
                // sum small contributions first
                let mut values: Vec<f64> = heap.iter().map(|p| p.value).collect();
                values.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
                return Ok(values.iter().sum());
            }
            let worst = heap.pop().expect("heap is never empty");
            let m = 0.5 * (worst.a + worst.b);
            if heap.len() + 2 > self.max_panels || m <= worst.a || m >= worst.b {
                return Err(QuadratureError::NotConverged {
                    a: worst.a,
                    b: worst.b,
                    error,
                    tol,
                });
            }
            let left = self.panel(f, worst.a, m)?;
            let right = self.panel(f, m, worst.b)?;
            scale += left.value.abs() + right.value.abs() - worst.value.abs();
            error = (error + left.error + right.error - worst.error).max(0.0);
            heap.push(left);
            heap.push(right);
            if heap.len() % 1024 == 0 {
                // refresh the running sums against drift
                scale = heap.iter().map(|p| p.value.abs()).sum();
                error = heap.iter().map(|p| p.error).sum();
            }
        }
    }
}

/// Surface area of the unit sphere S^{n-1} in R^n, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        // S_{n-1} = 2π/(n-2) · S_{n-3}
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_area(n - 2),
    }
}
