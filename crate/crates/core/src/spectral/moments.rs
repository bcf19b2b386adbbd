use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::legendre::{legendre_all, legendre_norm_sq};
use super::quadrature::QuadratureRule;

/// Which convention the entries of a [`MomentMatrix`] follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentKind {
    /// `M_{m,n} = ∫∫ f p_m(x) p_n(y) dx dy` over `[-1,1]²`.
    Raw,
    /// Expansion coefficients `c_{m,n}` with `f = Σ c_{m,n} p_m(x) p_n(y)`,
    /// i.e. `c = (2m+1)(2n+1)/4 · M`.
    Normalized,
}

/// A square table of 2-D Legendre moments of degree `N` in each variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentMatrix {
    degree: usize,
    kind: MomentKind,
    entries: Vec<f64>,
}

impl MomentMatrix {
    pub fn zeros(degree: usize, kind: MomentKind) -> Self {
        Self {
            degree,
            kind,
            entries: vec![0.0; (degree + 1) * (degree + 1)],
        }
    }

    pub fn from_fn(degree: usize, kind: MomentKind, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(degree, kind);
        for m in 0..=degree {
            for n in 0..=degree {
                out.set(m, n, f(m, n));
            }
        }
        out
    }

    /// A matrix with a single nonzero entry.
    pub fn single(degree: usize, kind: MomentKind, m: usize, n: usize, value: f64) -> Self {
        let mut out = Self::zeros(degree, kind);
        out.set(m, n, value);
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> MomentKind {
        self.kind
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[m * (self.degree + 1) + n]
    }

    pub fn set(&mut self, m: usize, n: usize, v: f64) {
        let d = self.degree + 1;
        self.entries[m * d + n] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let d = self.degree + 1;
        self.entries.iter().enumerate().map(move |(i, &v)| (i / d, i % d, v))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |a, &v| a.max(v.abs()))
    }

    /// Keeps entries for which `keep(m, n)` holds and zeroes the rest.
    pub fn filtered(&self, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut out = self.clone();
        let d = self.degree + 1;
        for (i, v) in out.entries.iter_mut().enumerate() {
            if !keep(i / d, i % d) {
                *v = 0.0;
            }
        }
        out
    }

    pub fn to_normalized(&self) -> Self {
        match self.kind {
            MomentKind::Normalized => self.clone(),
            MomentKind::Raw => Self::from_fn(self.degree, MomentKind::Normalized, |m, n| {
                self.get(m, n) / (legendre_norm_sq(m) * legendre_norm_sq(n))
            }),
        }
    }

    pub fn to_raw(&self) -> Self {
        match self.kind {
            MomentKind::Raw => self.clone(),
            MomentKind::Normalized => Self::from_fn(self.degree, MomentKind::Raw, |m, n| {
                self.get(m, n) * legendre_norm_sq(m) * legendre_norm_sq(n)
            }),
        }
    }

    /// Evaluates the truncated series `Σ c_{m,n} p_m(x) p_n(y)`.
    pub fn evaluate_series(&self, x: f64, y: f64) -> f64 {
        let c = self.to_normalized();
        let px = legendre_all(self.degree, x);
        let py = legendre_all(self.degree, y);
        c.iter().map(|(m, n, v)| v * px[m] * py[n]).sum()
    }

    /// Row-per-`m` CSV; the header lists the column degree `n`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m");
        for n in 0..=self.degree {
            let _ = write!(s, ",{n}");
        }
        s.push('\n');
        for m in 0..=self.degree {
            let _ = write!(s, "{m}");
            for n in 0..=self.degree {
                let _ = write!(s, ",{:.17e}", self.get(m, n));
            }
            s.push('\n');
        }
        s
    }
}

/// One of the eight triangles cut out of `[-1,1]²` by the axes and the diagonals
/// `x = ±y`. The reference triangle is `0 ≤ v ≤ u ≤ 1`; `swap` exchanges the
/// roles of `x` and `y` and the signs reflect into the other quadrants.
#[derive(Debug, Clone, Copy)]
struct Cell {
    sx: f64,
    sy: f64,
    swap: bool,
}

/// Cells in the fixed summation order used for reproducible reductions.
const CELLS: [Cell; 8] = [
    Cell {
        sx: 1.0,
        sy: 1.0,
        swap: false,
    },
    Cell {
        sx: 1.0,
        sy: 1.0,
        swap: true,
    },
    Cell {
        sx: -1.0,
        sy: 1.0,
        swap: false,
    },
    Cell {
        sx: -1.0,
        sy: 1.0,
        swap: true,
    },
    Cell {
        sx: -1.0,
        sy: -1.0,
        swap: false,
    },
    Cell {
        sx: -1.0,
        sy: -1.0,
        swap: true,
    },
    Cell {
        sx: 1.0,
        sy: -1.0,
        swap: false,
    },
    Cell {
        sx: 1.0,
        sy: -1.0,
        swap: true,
    },
];

/// Quadrature points `(x, y, weight)` on `[-1,1]²`.
///
/// With `split_diagonals`, each of the eight triangles is mapped onto the unit
/// square by the collapsed map `(u, t) ↦ (u, u t)` (Jacobian `u`) and the
/// product rule is applied there; otherwise the plain tensor rule is used.
pub fn square_points(rule: &QuadratureRule, split_diagonals: bool) -> Vec<(f64, f64, f64)> {
    let n = rule.len();
    if !split_diagonals {
        let mut pts = Vec::with_capacity(n * n);
        for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
            for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
                pts.push((*x, *y, wx * wy));
            }
        }
        return pts;
    }
    let (unit, unit_w) = rule.mapped(0.0, 1.0);
    let mut pts = Vec::with_capacity(8 * n * n);
    for cell in CELLS {
        for (&u, &wu) in unit.iter().zip(&unit_w) {
            for (&t, &wt) in unit.iter().zip(&unit_w) {
                let (a, b) = (u, u * t);
                let (x, y) = if cell.swap { (b, a) } else { (a, b) };
                pts.push((cell.sx * x, cell.sy * y, wu * wt * u));
            }
        }
    }
    pts
}

/// Raw 2-D Legendre moments `M_{m,n}` of `f` for `m, n ≤ degree`.
///
/// The eight diagonal cells (or the single tensor cell) are integrated
/// independently and summed in the fixed order of [`square_points`].
pub fn moments_2d<F>(f: F, degree: usize, rule: &QuadratureRule, split_diagonals: bool) -> MomentMatrix
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let pts = square_points(rule, split_diagonals);
    let chunk = if split_diagonals { pts.len() / 8 } else { pts.len() };
    let d = degree + 1;
    let partials: Vec<Vec<f64>> = pts
        .par_chunks(chunk.max(1))
        .map(|cell| {
            let mut acc = vec![0.0; d * d];
            for &(x, y, w) in cell {
                let fw = f(x, y) * w;
                if fw == 0.0 {
                    continue;
                }
                let px = legendre_all(degree, x);
                let py = legendre_all(degree, y);
                for m in 0..d {
                    let a = fw * px[m];
                    for n in 0..d {
                        acc[m * d + n] += a * py[n];
                    }
                }
            }
            acc
        })
        .collect();
    let mut out = MomentMatrix::zeros(degree, MomentKind::Raw);
    for part in &partials {
        for (o, p) in out.entries.iter_mut().zip(part) {
            *o += p;
        }
    }
    out
}
