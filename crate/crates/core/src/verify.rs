//! The acceptance suite: eleven numbered criteria, each a list of checks with
//! measured values, bounds and a wall-clock budget.
//!
//! A check is `Pass` or `Fail` against its bound. `Unattainable` marks a
//! requirement that the mathematics rules out; the measured value is still
//! reported and the check is held to the best bound that does hold. `Info`
//! lines carry context and never decide a verdict.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::cosine::{
    annihilation_check, grid_norm, image_projection, self_adjointness_defect, CosineOperator, TorusInvariantFunction,
};
use crate::fredholm::{
    first_kind_round_trip, solve_first_kind_with, solve_second_kind, FirstKindOptions, MetricProfile,
};
use crate::geometry::{
    gluck_warner, orbit_representative, pairing, reduce_to_orbit, self_dual_split, sphere_pairing, torus_act,
    OrbitParams, Plane, TorusElement, Vector4,
};
use crate::hermitian::{
    complex_l1_norm, euclidean_norm, fit_hermitian, is_hermitian_metric, ComplexVector, HermitianForm,
    HermitianVerdict, ProjectiveSample,
};
use crate::klain::{
    abs_cos_integral, klain_l1, klain_structure_report, orbit_integral_elliptic, series_i, torus_family_integral,
    CroftonMeasureL1, TORUS_QUADRATURE_ORDER,
};
use crate::sampling::halton_point;
use crate::spectral::{
    delta_torus_coefficients, gauss_legendre, legendre_all, legendre_eval, moments_2d, DEFAULT_ORDER,
};
use crate::Error;

pub const CRITERIA: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unattainable,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unattainable => "UNATTAINABLE",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `value ≤ bound`.
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::judged(name, value, bound, value <= bound)
    }

    /// Passes when `value ≥ bound`.
    fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::judged(name, value, bound, value >= bound)
    }

    fn judged(name: impl Into<String>, value: f64, bound: f64, ok: bool) -> Self {
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            bound,
            note: None,
        }
    }

    fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CriterionResult {
    fn finish(id: usize, title: &'static str, budget: f64, start: Instant, mut checks: Vec<Check>) -> Self {
        let seconds = start.elapsed().as_secs_f64();
        checks.push(Check::at_most("wall time [s]", seconds, budget));
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().any(|c| c.status == Status::Unattainable) {
            Status::Unattainable
        } else {
            Status::Pass
        };
        Self {
            id,
            title,
            status,
            checks,
            seconds,
            budget_seconds: budget,
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// One line: id, verdict, title, time, and the failing or unattainable
    /// checks if there are any.
    pub fn summary_line(&self) -> String {
        let flagged: Vec<String> = self
            .checks
            .iter()
            .filter(|c| matches!(c.status, Status::Fail | Status::Unattainable))
            .map(|c| format!("{} [{}: {:.3e} vs {:.1e}]", c.status, c.name, c.value, c.bound))
            .collect();
        let mut line = format!(
            "criterion {:>2} {:<12} {:<34} {:>7.3}s / {:>4.0}s",
            self.id,
            self.status.to_string(),
            self.title,
            self.seconds,
            self.budget_seconds
        );
        if !flagged.is_empty() {
            line.push_str("  ");
            line.push_str(&flagged.join("; "));
        }
        line
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for c in &self.checks {
            write!(
                f,
                "    {:<12} {:<48} {:>12.4e}  bound {:>9.2e}",
                c.status.to_string(),
                c.name,
                c.value,
                c.bound
            )?;
            if let Some(n) = &c.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub criteria: Vec<CriterionResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| !c.failed())
    }

    pub fn table(&self) -> String {
        self.criteria.iter().map(|c| c.summary_line() + "\n").collect()
    }
}

pub fn run_all() -> Report {
    Report {
        criteria: (1..=CRITERIA)
            .map(|id| run_criterion(id).expect("id in range"))
            .collect(),
    }
}

pub fn run_criterion(id: usize) -> crate::Result<CriterionResult> {
    Ok(match id {
        1 => legendre_moments(),
        2 => klain_examples(),
        3 => elliptic_agreement(),
        4 => kernel_annihilation(),
        5 => self_adjointness(),
        6 => klain_signature(),
        7 => second_kind(),
        8 => crofton_inversion(),
        9 => orbit_machinery(),
        10 => hermitian_characterization(),
        11 => delta_expansion(),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "criteria are numbered 1..={CRITERIA}, got {id}"
            )))
        }
    })
}

fn failure(name: &str, e: impl fmt::Display) -> Check {
    Check::judged(name, f64::NAN, f64::NAN, false).note(e.to_string())
}

fn legendre_moments() -> CriterionResult {
    let start = Instant::now();
    let mom = moments_2d(
        |x: f64, y: f64| x.abs().max(y.abs()),
        4,
        &gauss_legendre(DEFAULT_ORDER),
        true,
    );
    let listed = [
        (0, 0, 8.0 / 3.0),
        (2, 0, 4.0 / 15.0),
        (0, 2, 4.0 / 15.0),
        (2, 2, -8.0 / 105.0),
        (2, 4, 4.0 / 315.0),
        (4, 2, 4.0 / 315.0),
        (4, 4, -8.0 / 693.0),
    ];
    let checks = listed
        .iter()
        .map(|&(m, n, v)| Check::at_most(format!("|M{m}{n} - ({v:.6})|"), (mom.get(m, n) - v).abs(), 1e-9))
        .collect();
    CriterionResult::finish(1, "Legendre moments of max(|x|,|y|)", 1.0, start, checks)
}

fn complex_line(psi: f64) -> Plane {
    let (s, c) = psi.sin_cos();
    Plane::new(Vector4::new(c, 0.0, s, 0.0), Vector4::new(0.0, c, 0.0, s)).expect("unit spanning vectors")
}

/// Klain value of a plane from its sphere heights and, independently, by
/// integrating the Crofton measure over the torus orbit.
fn klain_two_ways(p: &Plane) -> crate::Result<(f64, f64)> {
    let s = gluck_warner(p)?;
    let formula = klain_l1(s.x.clamp(-1.0, 1.0), s.y.clamp(-1.0, 1.0))?.value;
    let direct = CroftonMeasureL1::default().klain(p, TORUS_QUADRATURE_ORDER)?;
    Ok((formula, direct))
}

fn klain_examples() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    match klain_two_ways(&Plane::first_axis()) {
        Ok((f, d)) => {
            checks.push(Check::at_most("|Kl(C x {0}) - 1|", (f - 1.0).abs(), 1e-10));
            checks.push(Check::at_most(
                "|Kl(C x {0}) - 1| via Crofton measure",
                (d - 1.0).abs(),
                1e-10,
            ));
        }
        Err(e) => checks.push(failure("Kl(C x {0})", e)),
    }
    for k in 0..=4 {
        let psi = k as f64 * PI / 8.0;
        let expect = (psi.cos().abs() + psi.sin().abs()).powi(2);
        match klain_two_ways(&complex_line(psi)) {
            Ok((f, d)) => {
                let err = (f - expect).abs().max((d - expect).abs());
                checks.push(Check::at_most(format!("complex line psi = {k}pi/8"), err, 1e-6));
            }
            Err(e) => checks.push(failure("complex line", e)),
        }
    }
    CriterionResult::finish(2, "Klain examples", 1.0, start, checks)
}

fn criterion_grid() -> Vec<OrbitParams> {
    let step = PI / 12.0;
    let mut out = Vec::new();
    for i in 0..=6 {
        for j in 0..=6 {
            let (theta, psi) = (i as f64 * step, j as f64 * step);
            if theta + 2.0 * psi <= PI + 1e-12 {
                out.push(OrbitParams::new(theta, psi).expect("grid inside the label range"));
            }
        }
    }
    out
}

fn elliptic_agreement() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut quad_err: f64 = 0.0;
    let (mut series_err, mut worst_k2, mut excess_over_tail): (f64, f64, f64) = (0.0, 0.0, f64::NEG_INFINITY);
    let mut long_err: f64 = 0.0;
    for o in criterion_grid() {
        let closed = orbit_integral_elliptic(o);
        match torus_family_integral(&orbit_representative(o), TORUS_QUADRATURE_ORDER) {
            Ok(q) => quad_err = quad_err.max((q - closed).abs() / closed.abs().max(1.0)),
            Err(e) => checks.push(failure("torus quadrature", e)),
        }
        let (short, long) = match (series_i(o.theta, o.psi, 30), series_i(o.theta, o.psi, 100)) {
            (Ok(s), Ok(l)) => (s, l),
            (Err(e), _) | (_, Err(e)) => {
                checks.push(failure("series", e));
                continue;
            }
        };
        if short.k_squared > 0.9 {
            continue;
        }
        let err = (short.value - closed).abs();
        if err > series_err {
            series_err = err;
            worst_k2 = short.k_squared;
        }
        excess_over_tail = excess_over_tail.max(err - short.tail_bound);
        long_err = long_err.max((long.value - closed).abs());
    }
    checks.push(Check::at_most("quadrature vs 16 A E(k), relative", quad_err, 1e-8));
    let series = Check::at_most("series (30 terms, k^2 <= 0.9) vs closed form", series_err, 1e-6);
    checks.push(if series.status == Status::Fail && excess_over_tail <= 1e-12 {
        series.with_status(Status::Unattainable).note(format!(
            "worst at k^2 = {worst_k2:.3}; equals the binomial-series tail, so 30 terms cannot reach 1e-6 there"
        ))
    } else {
        series
    });
    checks.push(Check::at_most(
        "series error above its tail bound",
        excess_over_tail.max(0.0),
        1e-12,
    ));
    checks.push(Check::at_most(
        "series (100 terms, k^2 <= 0.9) vs closed form",
        long_err,
        1e-6,
    ));

    checks.push(Check::at_most(
        "|I'(1,0) - 8 pi|",
        (abs_cos_integral(1.0, 0.0) - 8.0 * PI).abs(),
        1e-8,
    ));
    checks.push(Check::at_most(
        "|I'(1,1) - 32|",
        (abs_cos_integral(1.0, 1.0) - 32.0).abs(),
        1e-8,
    ));
    let diag: f64 = [0.1, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&a| (abs_cos_integral(a, a) - 32.0 * a).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("|I'(a,a) - 32 a|", diag, 1e-8).note("k = 1 on the diagonal, so E(k) = 1"));
    let literal = (abs_cos_integral(0.5, 0.5) - 8.0 * PI * 0.5).abs();
    checks.push(
        Check::at_most("|I'(a,a) - 8 pi a| at a = 1/2", literal, 1e-8)
            .with_status(Status::Info)
            .note("incompatible with I'(1,1) = 32; not counted"),
    );
    CriterionResult::finish(3, "elliptic three-way agreement", 10.0, start, checks)
}

fn kernel_annihilation() -> CriterionResult {
    let start = Instant::now();
    let op = CosineOperator::new(DEFAULT_ORDER);
    let mut checks: Vec<Check> = [(4, 0), (0, 4), (6, 2), (2, 6), (6, 0)]
        .iter()
        .map(|&(m, n)| {
            let c = annihilation_check(&op, m, n, 1e-3);
            Check::at_most(format!("||C(p{m} p{n})|| annihilated"), c.norm, c.threshold)
        })
        .collect();
    let c = annihilation_check(&op, 2, 0, 1e-2);
    checks.push(Check::at_least("||C(p2 p0)|| not annihilated", c.norm, c.threshold));
    CriterionResult::finish(4, "kernel annihilation", 60.0, start, checks)
}

/// Antipodally even combination of `p_m(x) p_n(y)` with `m + n` even,
/// `m, n ≤ 6`, coefficients from `coeffs`.
fn even_polynomial(coeffs: Vec<f64>) -> TorusInvariantFunction {
    TorusInvariantFunction::new("poly", move |x, y| {
        let (px, py) = (legendre_all(6, x), legendre_all(6, y));
        let mut acc = 0.0;
        let mut k = 0;
        for m in 0..=6 {
            for n in (m % 2..=6).step_by(2) {
                acc += coeffs[k] * px[m] * py[n];
                k += 1;
            }
        }
        acc
    })
}

fn self_adjointness() -> CriterionResult {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for pair in 0..20 {
        let coeffs = |offset: usize| -> Vec<f64> {
            halton_point(1 + 2 * pair + offset, 25)
                .into_iter()
                .map(|u| 2.0 * u - 1.0)
                .collect()
        };
        let (f, g) = (even_polynomial(coeffs(0)), even_polynomial(coeffs(1)));
        let scale = grid_norm(&f, DEFAULT_ORDER) * grid_norm(&g, DEFAULT_ORDER);
        worst = worst.max(self_adjointness_defect(&f, &g, DEFAULT_ORDER) / scale);
    }
    let checks = vec![Check::at_most("max defect / (||f|| ||g||), 20 pairs", worst, 1e-10)];
    CriterionResult::finish(5, "self-adjointness", 5.0, start, checks)
}

fn klain_signature() -> CriterionResult {
    let start = Instant::now();
    let checks = match klain_structure_report(12, DEFAULT_ORDER, 1e-4) {
        Ok(r) => {
            let worst = r
                .verdicts
                .iter()
                .filter(|v| v.pass.is_some())
                .map(|v| v.relative)
                .fold(0.0, f64::max);
            let count = r.verdicts.iter().filter(|v| v.pass.is_some()).count();
            vec![Check::at_most("max |M_mn| / M00 over even |m-n| >= 4", worst, 1e-4)
                .note(format!("{count} indices up to degree 12"))]
        }
        Err(e) => vec![failure("structure report", e)],
    };
    CriterionResult::finish(6, "Klain spectral signature", 10.0, start, checks)
}

fn second_kind() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    match solve_second_kind(1.0, |x, y| x * y, |x| x, (0.0, 1.0), 32) {
        Ok(s) => {
            let on_nodes = s
                .nodes
                .iter()
                .zip(&s.values)
                .map(|(x, v)| (v - 1.5 * x).abs())
                .fold(0.0, f64::max);
            let between = (0..=20)
                .map(|i| i as f64 / 20.0)
                .map(|x| (s.eval(x) - 1.5 * x).abs())
                .fold(0.0, f64::max);
            checks.push(Check::at_most("K = xy, f = x: |phi - 3x/2| on nodes", on_nodes, 1e-10));
            checks.push(Check::at_most(
                "K = xy, f = x: |phi - 3x/2| interpolated",
                between,
                1e-10,
            ));
        }
        Err(e) => checks.push(failure("K = xy", e)),
    }
    let kernel = |x: f64, y: f64| x.cos() * y.cos();
    match solve_second_kind(FRAC_PI_2, kernel, f64::cos, (0.0, PI), 32) {
        Err(Error::SingularSystem { inner_product, .. }) => {
            checks.push(Check::at_most(
                "|<psi, f>| - sqrt(pi/2) on the eigenpair",
                (inner_product.abs() - FRAC_PI_2.sqrt()).abs(),
                1e-8,
            ));
        }
        Err(e) => checks.push(failure("eigenpair, unsolvable side", e)),
        Ok(_) => checks.push(failure("eigenpair, unsolvable side", "solved although <psi, f> != 0")),
    }
    match solve_second_kind(FRAC_PI_2, kernel, f64::sin, (0.0, PI), 32) {
        Ok(s) => {
            checks.push(Check::judged(
                "eigenpair flagged on spectrum",
                s.on_spectrum as u8 as f64,
                1.0,
                s.on_spectrum,
            ));
            checks.push(Check::at_most("eigenpair, solvable side: residual", s.residual, 1e-8));
        }
        Err(e) => checks.push(failure("eigenpair, solvable side", e)),
    }
    CriterionResult::finish(7, "Fredholm second kind", 1.0, start, checks)
}

fn crofton_inversion() -> CriterionResult {
    let start = Instant::now();
    let opts = FirstKindOptions {
        nodes: 64,
        reg: 1e-10,
        ..FirstKindOptions::default()
    };
    let mut checks = Vec::new();
    match first_kind_round_trip(|eta| (2.0 * eta).sin().powi(2), &opts) {
        Ok((_, err)) => checks.push(
            Check::at_most("round trip f0 = sin^2(2 eta), L2 relative", err, 1e-4)
                .note("density vanishing on the degenerate orbits"),
        ),
        Err(e) => checks.push(failure("round trip", e)),
    }
    for profile in [MetricProfile::euclidean(), MetricProfile::l1()] {
        match solve_first_kind_with(&profile, &opts) {
            Ok(s) => {
                let note = format!("atoms {:.3e}, {:.3e}", s.atoms[0], s.atoms[1]);
                checks
                    .push(Check::at_most(format!("{} forward residual", profile.label()), s.residual, 1e-3).note(note));
            }
            Err(e) => checks.push(failure(profile.label(), e)),
        }
    }
    CriterionResult::finish(8, "Crofton inversion", 5.0, start, checks)
}

fn halton_plane(i: usize) -> Plane {
    let mut k = i;
    loop {
        let u = halton_point(k, 8);
        let c: Vec<f64> = u.into_iter().map(|t| 2.0 * t - 1.0).collect();
        if let Ok(p) = Plane::new(
            Vector4::new(c[0], c[1], c[2], c[3]),
            Vector4::new(c[4], c[5], c[6], c[7]),
        ) {
            return p;
        }
        k += 1000;
    }
}

fn orbit_machinery() -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    let (mut theta_err, mut psi_err, mut rebuild, mut closed_err): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for i in 1..=100 {
        let u = halton_point(i, 4);
        let (theta, psi) = (u[0] * FRAC_PI_2, u[1] * FRAC_PI_2);
        let (alpha, beta) = (u[2] * TAU, u[3] * TAU);
        let rep = orbit_representative(OrbitParams::new(theta, psi).expect("inside label range"));
        let p = torus_act(TorusElement::new(alpha, beta), &rep);
        match reduce_to_orbit(&p) {
            Ok((o, g)) => {
                let expect_psi = if theta + 2.0 * psi <= PI { psi } else { PI - theta - psi };
                theta_err = theta_err.max((o.theta - theta).abs());
                psi_err = psi_err.max((o.psi - expect_psi).abs());
                rebuild = rebuild.max(torus_act(g, &orbit_representative(o)).projector_distance(&p));
            }
            Err(e) => checks.push(failure("reduce_to_orbit", e)),
        }
        match self_dual_split(&p) {
            Ok(s) => {
                let t2 = theta + 2.0 * psi;
                let plus = [
                    theta.cos(),
                    -theta.sin() * (alpha + beta).sin(),
                    theta.sin() * (alpha + beta).cos(),
                ];
                let minus = [
                    t2.cos(),
                    t2.sin() * (alpha - beta).sin(),
                    t2.sin() * (alpha - beta).cos(),
                ];
                for k in 0..3 {
                    closed_err = closed_err
                        .max((s.plus[k] - plus[k]).abs())
                        .max((s.minus[k] - minus[k]).abs());
                }
            }
            Err(e) => checks.push(failure("self-dual split", e)),
        }
    }
    checks.push(Check::at_most("reduce_to_orbit: theta", theta_err, 1e-9));
    checks.push(Check::at_most("reduce_to_orbit: psi (canonical label)", psi_err, 1e-9));
    checks.push(Check::at_most(
        "reduce_to_orbit: rebuilt plane, projector distance",
        rebuild,
        1e-9,
    ));
    checks.push(Check::at_most(
        "sphere points of torus-acted representative",
        closed_err,
        1e-12,
    ));

    let mut pair_err: f64 = 0.0;
    for i in 1..=100 {
        let (p, q) = (halton_plane(2 * i), halton_plane(2 * i + 1));
        match (pairing(&p, &q), gluck_warner(&p), gluck_warner(&q)) {
            (Ok(a), Ok(gp), Ok(gq)) => pair_err = pair_err.max((a - sphere_pairing(&gp, &gq)).abs()),
            _ => checks.push(failure("pairing", "degenerate sample plane")),
        }
    }
    checks.push(Check::at_most("pairing vs sphere identity, 100 pairs", pair_err, 1e-12));
    CriterionResult::finish(9, "orbit machinery", 1.0, start, checks)
}

fn hermitian_characterization() -> CriterionResult {
    let start = Instant::now();
    const SAMPLE: usize = 256;
    let mut checks = Vec::new();
    let verdict_check = |checks: &mut Vec<Check>, name: &str, expect: bool, r: crate::Result<HermitianVerdict>| match r
    {
        Ok(v) => {
            let c = if expect {
                Check::at_most(format!("{name}: residual"), v.residual, 1e-8)
            } else {
                Check::at_least(format!("{name}: residual"), v.residual, 1e-2)
            };
            let ok = v.hermitian == expect && c.status == Status::Pass;
            checks.push(
                c.note(format!("verdict {}, rank {}", v.hermitian, v.rank))
                    .with_status(if ok { Status::Pass } else { Status::Fail }),
            );
            Some(v)
        }
        Err(e) => {
            checks.push(failure(name, e));
            None
        }
    };
    for n in [2, 3] {
        let v = verdict_check(
            &mut checks,
            &format!("euclidean, n = {n}"),
            true,
            is_hermitian_metric(euclidean_norm, n, 1e-8, SAMPLE),
        );
        if let Some(v) = v {
            checks.push(Check::judged(
                format!("rank = n^2, n = {n}"),
                v.rank as f64,
                (n * n) as f64,
                v.rank == n * n,
            ));
        }
    }
    let h0 = HermitianForm::new(nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.3),
            Complex64::new(0.0, -0.3),
            Complex64::new(2.0, 0.0),
        ],
    ))
    .expect("Hermitian by construction");
    let norm = h0.induced_norm();
    if let Some(v) = verdict_check(
        &mut checks,
        "synthetic Hermitian",
        true,
        is_hermitian_metric(|z: &ComplexVector| norm(z), 2, 1e-8, SAMPLE),
    ) {
        checks.push(Check::at_most(
            "synthetic Hermitian: recovered form",
            v.form.distance(&h0),
            1e-8,
        ));
    }
    verdict_check(
        &mut checks,
        "complex l1, n = 2",
        false,
        is_hermitian_metric(complex_l1_norm, 2, 1e-8, SAMPLE),
    );
    match ProjectiveSample::halton(4, SAMPLE) {
        Ok(s) => match fit_hermitian(|z| z.norm().powi(2), &s) {
            Ok(f) => checks.push(Check::judged("rank = n^2, n = 4", f.rank as f64, 16.0, f.rank == 16)),
            Err(e) => checks.push(failure("rank, n = 4", e)),
        },
        Err(e) => checks.push(failure("sample, n = 4", e)),
    }
    CriterionResult::finish(10, "Hermitian characterization", 2.0, start, checks)
}

fn delta_expansion() -> CriterionResult {
    let start = Instant::now();
    let c = delta_torus_coefficients(5, 5);
    let mut coeff_err: f64 = 0.0;
    for k in 0..=5 {
        for l in 0..=5 {
            let expect =
                legendre_eval(2 * k, 0.0) * legendre_eval(2 * l, 0.0) * ((4 * k + 1) * (4 * l + 1)) as f64 / 4.0;
            coeff_err = coeff_err.max((c.get(2 * k, 2 * l) - expect).abs() / expect.abs().max(1.0));
        }
    }
    let img = image_projection(&c);
    let mismatches = img
        .iter()
        .filter(|&(m, n, v)| {
            let keep = m % 2 == 0 && n % 2 == 0 && (m / 2).abs_diff(n / 2) <= 1;
            if keep {
                v != c.get(m, n)
            } else {
                v != 0.0
            }
        })
        .count();
    let checks = vec![
        Check::at_most("coefficients vs p2k(0) p2l(0)(4k+1)(4l+1)/4", coeff_err, 1e-14),
        Check::at_most(
            "image projection: entries off the |k-l| <= 1 pattern",
            mismatches as f64,
            0.0,
        ),
    ];
    CriterionResult::finish(11, "delta expansion", 1.0, start, checks)
}
