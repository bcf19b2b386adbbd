use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use gcos_core::cosine::{
    annihilation_check, grid_norm, self_adjointness_defect, CosineOperator, TorusInvariantFunction,
};
use gcos_core::fredholm::{
    select_reg_discrepancy, solve_first_kind_with, solve_second_kind, surjectivity_kernel, FirstKindOptions,
    MetricProfile, OrbitWeight,
};
use gcos_core::geometry::{
    gluck_warner, orbit_representative, pairing, reduce_to_orbit, self_dual_split, sphere_pairing, OrbitParams, Plane,
    Vector4,
};
use gcos_core::hermitian::{complex_l1_norm, euclidean_norm, is_hermitian_metric, ComplexVector, HermitianForm};
use gcos_core::klain::{klain_l1, klain_l1_with, klain_structure_report, KlainMethod};
use gcos_core::spectral::{
    delta_torus_coefficients, gauss_legendre, legendre_all, moments_2d, MomentKind, MomentMatrix,
};
use gcos_core::verify;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::output::{diagnostics, num, Out};
use crate::{
    Cli, CliError, Command, CosineCmd, CroftonCmd, FredholmCmd, HermitianCmd, KlainSub, LegendreCmd, OrbitCmd,
};

type Res = Result<(), CliError>;

pub fn run(cli: &Cli, cfg: &RunConfig) -> Res {
    let mut out = Out::new(cfg.output_format);
    let angle = Angle(cli.degrees);
    match &cli.command {
        Command::Orbit(OrbitCmd::Reduce { plane }) => orbit_reduce(&mut out, angle, plane)?,
        Command::Orbit(OrbitCmd::Representative { theta, psi }) => {
            let o = OrbitParams::new(angle.read(*theta), angle.read(*psi))?;
            let p = orbit_representative(o);
            match out.format {
                Format::Csv => out.line(&p.to_string())?,
                Format::Json => out.record(&PlaneRecord { plane: p.to_array() })?,
            }
        }
        Command::Gw { plane } => gw(&mut out, angle, plane)?,
        Command::Pairing { plane, other } => {
            let (p, q) = (make_plane(plane)?, make_plane(other)?);
            let direct = pairing(&p, &q)?;
            let sphere = sphere_pairing(&gluck_warner(&p)?, &gluck_warner(&q)?);
            match out.format {
                Format::Csv => {
                    out.line("pairing,sphere_pairing")?;
                    out.csv_row(&[num(direct), num(sphere)])?;
                }
                Format::Json => out.record(&PairingRecord {
                    pairing: direct,
                    sphere_pairing: sphere,
                })?,
            }
        }
        Command::Legendre(LegendreCmd::Moments {
            function,
            degree,
            normalized,
            no_split,
        }) => {
            let f = named_square_function(function)?;
            let raw = moments_2d(&f, *degree, &gauss_legendre(cfg.quadrature_order), !no_split);
            emit_moments(&mut out, if *normalized { raw.to_normalized() } else { raw })?;
        }
        Command::Legendre(LegendreCmd::Delta { max_k, max_l, image }) => {
            let c = delta_torus_coefficients(*max_k, *max_l);
            emit_moments(
                &mut out,
                if *image {
                    gcos_core::cosine::image_projection(&c)
                } else {
                    c
                },
            )?;
        }
        Command::Cosine(cmd) => cosine(&mut out, cfg, cmd)?,
        Command::Crofton(CroftonCmd::Solve {
            metric,
            nodes,
            reg,
            weight,
            atoms,
            select_reg,
        }) => {
            let weight: OrbitWeight = weight
                .parse()
                .map_err(|e: gcos_core::Error| CliError::Usage(e.to_string()))?;
            let opts = FirstKindOptions {
                nodes: *nodes,
                reg: *reg,
                weight,
                endpoint_atoms: *atoms,
            };
            crofton(&mut out, &metric_profile(metric)?, &opts, *select_reg)?;
        }
        Command::Fredholm(FredholmCmd::Solve2 {
            lambda,
            kernel,
            rhs,
            nodes,
            a,
            b,
        }) => fredholm(&mut out, *lambda, kernel, rhs, *nodes, (*a, *b))?,
        Command::Klain(args) => match &args.sub {
            Some(KlainSub::Structure { degree }) => {
                let r = klain_structure_report(*degree, cfg.quadrature_order, cfg.tolerance("structure", 1e-4))?;
                match out.format {
                    Format::Csv => {
                        out.line("m,n,moment,relative,class,pass")?;
                        for v in &r.verdicts {
                            let class = serde_json::to_value(v.class).unwrap_or_default();
                            let pass = v.pass.map_or("".to_string(), |p| p.to_string());
                            out.csv_row(&[
                                v.m.to_string(),
                                v.n.to_string(),
                                num(v.moment),
                                num(v.relative),
                                class.as_str().unwrap_or("").to_string(),
                                pass,
                            ])?;
                        }
                    }
                    Format::Json => {
                        for v in &r.verdicts {
                            out.record(v)?;
                        }
                    }
                }
            }
            None => klain_grid(&mut out, args.grid, &args.method)?,
        },
        Command::Hermitian(HermitianCmd::Fit { dim, metric, samples }) => {
            hermitian_fit(&mut out, cfg, *dim, metric, *samples)?
        }
        Command::Verify { criteria } => verify_cmd(&mut out, criteria)?,
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Copy)]
struct Angle(bool);

impl Angle {
    fn read(self, v: f64) -> f64 {
        if self.0 {
            v.to_radians()
        } else {
            v
        }
    }

    fn write(self, v: f64) -> f64 {
        if self.0 {
            v.to_degrees()
        } else {
            v
        }
    }
}

fn make_plane(c: &[f64; 8]) -> Result<Plane, CliError> {
    Ok(Plane::new(
        Vector4::new(c[0], c[1], c[2], c[3]),
        Vector4::new(c[4], c[5], c[6], c[7]),
    )?)
}

#[derive(Serialize)]
struct PlaneRecord {
    plane: [f64; 8],
}

#[derive(Serialize)]
struct PairingRecord {
    pairing: f64,
    sphere_pairing: f64,
}

#[derive(Serialize)]
struct OrbitRecord {
    theta: f64,
    psi: f64,
    alpha: f64,
    beta: f64,
    x: f64,
    y: f64,
}

fn orbit_reduce(out: &mut Out, angle: Angle, plane: &[f64; 8]) -> Res {
    let p = make_plane(plane)?;
    let (o, g) = reduce_to_orbit(&p)?;
    let (x, y) = o.heights();
    let r = OrbitRecord {
        theta: angle.write(o.theta),
        psi: angle.write(o.psi),
        alpha: angle.write(g.alpha),
        beta: angle.write(g.beta),
        x,
        y,
    };
    match out.format {
        Format::Csv => {
            out.line("theta,psi,alpha,beta,x,y")?;
            out.csv_row(&[num(r.theta), num(r.psi), num(r.alpha), num(r.beta), num(r.x), num(r.y)])
        }
        Format::Json => out.record(&r),
    }
    .map_err(Into::into)
}

#[derive(Serialize)]
struct GwRecord {
    plus: [f64; 3],
    minus: [f64; 3],
    x: f64,
    phi1: f64,
    y: f64,
    phi2: f64,
}

fn gw(out: &mut Out, angle: Angle, plane: &[f64; 8]) -> Res {
    let p = make_plane(plane)?;
    let s = self_dual_split(&p)?;
    let g = gluck_warner(&p)?;
    let r = GwRecord {
        plus: s.plus,
        minus: s.minus,
        x: g.x,
        phi1: angle.write(g.phi1),
        y: g.y,
        phi2: angle.write(g.phi2),
    };
    match out.format {
        Format::Csv => {
            out.line("x,phi1,y,phi2,plus1,plus2,plus3,minus1,minus2,minus3")?;
            let mut row = vec![num(r.x), num(r.phi1), num(r.y), num(r.phi2)];
            row.extend(r.plus.iter().chain(&r.minus).map(|&v| num(v)));
            out.csv_row(&row)?;
        }
        Format::Json => out.record(&r)?,
    }
    Ok(())
}

fn named_square_function(name: &str) -> Result<Box<dyn Fn(f64, f64) -> f64 + Send + Sync>, CliError> {
    Ok(match name {
        "max" => Box::new(|x: f64, y: f64| x.abs().max(y.abs())),
        "abs-sum" => Box::new(|x: f64, y: f64| (x + y).abs()),
        "abs-diff" => Box::new(|x: f64, y: f64| (x - y).abs()),
        "one" => Box::new(|_, _| 1.0),
        "klain" => {
            Box::new(|x: f64, y: f64| klain_l1(x.clamp(-1.0, 1.0), y.clamp(-1.0, 1.0)).map_or(f64::NAN, |v| v.value))
        }
        other => {
            if let Some(idx) = other.strip_prefix("legendre:") {
                let (m, n) = parse_index_pair(idx)?;
                let f = TorusInvariantFunction::legendre_product(m, n);
                Box::new(move |x, y| f.eval(x, y))
            } else {
                return Err(CliError::Usage(format!(
                    "unknown function {other:?}; expected max, abs-sum, abs-diff, one, klain or legendre:M,N"
                )));
            }
        }
    })
}

fn emit_moments(out: &mut Out, m: MomentMatrix) -> Res {
    match out.format {
        Format::Csv => out.raw(&m.to_csv())?,
        Format::Json => {
            #[derive(Serialize)]
            struct Entry {
                m: usize,
                n: usize,
                value: f64,
                kind: MomentKind,
            }
            for (i, j, v) in m.iter() {
                out.record(&Entry {
                    m: i,
                    n: j,
                    value: v,
                    kind: m.kind(),
                })?;
            }
        }
    }
    Ok(())
}

fn parse_index_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad index pair {s:?}; expected M,N"));
    let (m, n) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        m.trim().parse().map_err(|_| bad())?,
        n.trim().parse().map_err(|_| bad())?,
    ))
}

/// Rows `m,c_m0,c_m1,...` after a header, as written by `legendre moments`.
fn read_coefficient_csv(path: &Path) -> Result<MomentMatrix, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let vals: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        rows.push(vals);
    }
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(CliError::Usage(format!(
            "{}: expected a square coefficient table",
            path.display()
        )));
    }
    Ok(MomentMatrix::from_fn(d - 1, MomentKind::Normalized, |m, n| rows[m][n]))
}

fn cosine_input(spec: &str) -> Result<TorusInvariantFunction, CliError> {
    Ok(match spec {
        "one" => TorusInvariantFunction::constant(1.0),
        "max" => TorusInvariantFunction::new("max", |x: f64, y: f64| x.abs().max(y.abs())),
        "klain" => TorusInvariantFunction::new("klain", |x: f64, y: f64| {
            klain_l1(x.clamp(-1.0, 1.0), y.clamp(-1.0, 1.0)).map_or(f64::NAN, |v| v.value)
        }),
        s if s.starts_with("legendre:") => {
            let (m, n) = parse_index_pair(&s["legendre:".len()..])?;
            TorusInvariantFunction::legendre_product(m, n)
        }
        path => TorusInvariantFunction::from_coefficients(path, read_coefficient_csv(Path::new(path))?),
    })
}

fn cosine(out: &mut Out, cfg: &RunConfig, cmd: &CosineCmd) -> Res {
    let order = cfg.quadrature_order;
    match cmd {
        CosineCmd::Apply { f, points } => {
            let f = cosine_input(f)?;
            let img = CosineOperator::new(order).apply(&f);
            #[derive(Serialize)]
            struct Sample {
                x: f64,
                y: f64,
                value: f64,
            }
            let samples: Vec<Sample> = gcos_core::cosine::scatter_points(*points)
                .into_iter()
                .map(|(x, y)| Sample {
                    x,
                    y,
                    value: img.eval(x, y),
                })
                .collect();
            match out.format {
                Format::Csv => {
                    out.line("x,y,value")?;
                    for s in &samples {
                        out.csv_row(&[num(s.x), num(s.y), num(s.value)])?;
                    }
                }
                Format::Json => {
                    for s in &samples {
                        out.record(s)?;
                    }
                }
            }
        }
        CosineCmd::KernelCheck { indices, factor } => {
            let pairs: Vec<(usize, usize)> = indices
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(parse_index_pair)
                .collect::<Result<_, _>>()?;
            let factor = factor.unwrap_or_else(|| cfg.tolerance("annihilation", 1e-3));
            if !(factor > 0.0) {
                return Err(CliError::Usage(format!("factor {factor} must be positive")));
            }
            let op = CosineOperator::new(order);
            // JSON records regardless of --format: {indices, norm, threshold, pass}
            for (m, n) in pairs {
                out.record(&annihilation_check(&op, m, n, factor))?;
            }
        }
        CosineCmd::Selfadjoint { degree, pairs } => {
            let tol = cfg.tolerance("selfadjoint", 1e-10);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let d = *degree;
            let random_poly = |rng: &mut ChaCha8Rng| {
                let mut coeffs = MomentMatrix::zeros(d, MomentKind::Normalized);
                for m in 0..=d {
                    for n in (m % 2..=d).step_by(2) {
                        coeffs.set(m, n, rng.gen_range(-1.0..1.0));
                    }
                }
                TorusInvariantFunction::new("poly", move |x, y| {
                    let (px, py) = (legendre_all(d, x), legendre_all(d, y));
                    coeffs.iter().map(|(m, n, c)| c * px[m] * py[n]).sum()
                })
            };
            #[derive(Serialize)]
            struct Row {
                pair: usize,
                defect: f64,
                scale: f64,
                pass: bool,
            }
            for pair in 0..*pairs {
                let (f, g) = (random_poly(&mut rng), random_poly(&mut rng));
                let defect = self_adjointness_defect(&f, &g, order);
                let scale = grid_norm(&f, order) * grid_norm(&g, order);
                out.record(&Row {
                    pair,
                    defect,
                    scale,
                    pass: defect <= tol * scale,
                })?;
            }
        }
    }
    Ok(())
}

/// `η ↦ F(η)` by linear interpolation in a two-column CSV (header optional).
fn profile_from_csv(path: &Path) -> Result<MetricProfile, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        match (
            cols.first().map(|s| s.parse::<f64>()),
            cols.get(1).map(|s| s.parse::<f64>()),
        ) {
            (Some(Ok(e)), Some(Ok(f))) => pts.push((e, f)),
            _ if i == 0 => continue,
            _ => return Err(CliError::Usage(format!("{}:{}: expected eta,F", path.display(), i + 1))),
        }
    }
    if pts.len() < 2 {
        return Err(CliError::Usage(format!(
            "{}: need at least two samples",
            path.display()
        )));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let label = path.display().to_string();
    Ok(MetricProfile::new(label, move |eta| {
        let k = pts.partition_point(|p| p.0 <= eta).clamp(1, pts.len() - 1);
        let ((e0, f0), (e1, f1)) = (pts[k - 1], pts[k]);
        let t = ((eta - e0) / (e1 - e0)).clamp(0.0, 1.0);
        f0 + t * (f1 - f0)
    }))
}

fn metric_profile(name: &str) -> Result<MetricProfile, CliError> {
    Ok(match name {
        "euclid" => MetricProfile::euclidean(),
        "l1" => MetricProfile::l1(),
        "linf" => MetricProfile::linf(),
        path => profile_from_csv(Path::new(path))?,
    })
}

#[derive(Serialize)]
struct CroftonDiagnostics<'a> {
    metric: &'a str,
    residual: f64,
    off_grid_residual: f64,
    condition: f64,
    reg: f64,
    weight: OrbitWeight,
    atoms: [f64; 2],
    ill_conditioned: bool,
}

fn crofton(out: &mut Out, profile: &MetricProfile, opts: &FirstKindOptions, select: bool) -> Res {
    if opts.nodes < 4 {
        return Err(CliError::Usage("--nodes must be at least 4".into()));
    }
    let s = if select {
        select_reg_discrepancy(profile, opts)?
    } else {
        solve_first_kind_with(profile, opts)?
    };
    let diag = CroftonDiagnostics {
        metric: profile.label(),
        residual: s.residual,
        off_grid_residual: s.off_grid_residual(profile, 201),
        condition: s.condition,
        reg: s.reg,
        weight: s.weight,
        atoms: s.atoms,
        ill_conditioned: s.ill_conditioned,
    };
    match out.format {
        Format::Csv => {
            out.line("eta,f")?;
            for (e, f) in s.nodes.iter().zip(&s.density) {
                out.csv_row(&[num(*e), num(*f)])?;
            }
            diagnostics(&diag);
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Node {
                eta: f64,
                f: f64,
            }
            for (&eta, &f) in s.nodes.iter().zip(&s.density) {
                out.record(&Node { eta, f })?;
            }
            out.record(&serde_json::json!({ "diagnostics": diag }))?;
        }
    }
    Ok(())
}

type Kernel = fn(f64, f64) -> f64;

fn builtin_kernel(name: &str) -> Result<(Kernel, (f64, f64)), CliError> {
    Ok(match name {
        "xy" => (|x, y| x * y, (0.0, 1.0)),
        "exp" => (|x: f64, y: f64| (x * y).exp(), (0.0, 1.0)),
        "coscos" => (|x: f64, y: f64| x.cos() * y.cos(), (0.0, PI)),
        "crofton" => (surjectivity_kernel, (0.0, FRAC_PI_2)),
        other => {
            return Err(CliError::Usage(format!(
                "unknown kernel {other:?}; expected xy, exp, coscos or crofton"
            )))
        }
    })
}

fn builtin_rhs(name: &str) -> Result<fn(f64) -> f64, CliError> {
    Ok(match name {
        "x" => |x| x,
        "one" => |_| 1.0,
        "cos" => f64::cos,
        "sin" => f64::sin,
        "exp" => f64::exp,
        other => {
            return Err(CliError::Usage(format!(
                "unknown rhs {other:?}; expected x, one, cos, sin or exp"
            )))
        }
    })
}

fn fredholm(out: &mut Out, lambda: f64, kernel: &str, rhs: &str, nodes: usize, ab: (Option<f64>, Option<f64>)) -> Res {
    let (k, default_interval) = builtin_kernel(kernel)?;
    let f = builtin_rhs(rhs)?;
    let interval = (ab.0.unwrap_or(default_interval.0), ab.1.unwrap_or(default_interval.1));
    if !(interval.0 < interval.1) || nodes == 0 {
        return Err(CliError::Usage(format!(
            "need a < b and nodes > 0, got {interval:?}, {nodes}"
        )));
    }
    let s = solve_second_kind(lambda, k, f, interval, nodes)?;
    #[derive(Serialize)]
    struct Diag {
        lambda: f64,
        residual: f64,
        condition: f64,
        on_spectrum: bool,
    }
    let diag = Diag {
        lambda: s.lambda,
        residual: s.residual,
        condition: s.condition,
        on_spectrum: s.on_spectrum,
    };
    match out.format {
        Format::Csv => {
            out.line("x,phi")?;
            for (x, v) in s.nodes.iter().zip(&s.values) {
                out.csv_row(&[num(*x), num(*v)])?;
            }
            diagnostics(&diag);
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Node {
                x: f64,
                phi: f64,
            }
            for (&x, &phi) in s.nodes.iter().zip(&s.values) {
                out.record(&Node { x, phi })?;
            }
            out.record(&serde_json::json!({ "diagnostics": diag }))?;
        }
    }
    Ok(())
}

fn klain_grid(out: &mut Out, n: usize, method: &str) -> Res {
    let method: KlainMethod = method
        .parse()
        .map_err(|e: gcos_core::Error| CliError::Usage(e.to_string()))?;
    if n == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let axis: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect()
    };
    #[derive(Serialize)]
    struct Row {
        x: f64,
        y: f64,
        kl: f64,
        method: KlainMethod,
        err: f64,
    }
    if out.format == Format::Csv {
        out.line("x,y,kl,method,err")?;
    }
    for &x in &axis {
        for &y in &axis {
            let v = klain_l1_with(x, y, method)?;
            let row = Row {
                x,
                y,
                kl: v.value,
                method: v.method,
                err: v.estimated_error,
            };
            match out.format {
                Format::Csv => {
                    let m = serde_json::to_value(row.method).unwrap_or_default();
                    out.csv_row(&[
                        num(x),
                        num(y),
                        num(row.kl),
                        m.as_str().unwrap_or("").to_string(),
                        num(row.err),
                    ])?
                }
                Format::Json => out.record(&row)?,
            }
        }
    }
    Ok(())
}

#[derive(serde::Deserialize)]
struct FormFile {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn hermitian_fit(out: &mut Out, cfg: &RunConfig, dim: usize, metric: &str, samples: usize) -> Res {
    let tol = cfg.tolerance("hermitian", gcos_core::hermitian::DEFAULT_TOLERANCE);
    let verdict = match metric {
        "euclid" => is_hermitian_metric(euclidean_norm, dim, tol, samples)?,
        "l1" => is_hermitian_metric(complex_l1_norm, dim, tol, samples)?,
        "linf" => is_hermitian_metric(
            |z: &ComplexVector| z.0.iter().map(|c| c.norm()).fold(0.0, f64::max),
            dim,
            tol,
            samples,
        )?,
        path => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            let file: FormFile = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            let h = HermitianForm::from_parts(&file.re, &file.im)?;
            if h.dim() != dim {
                return Err(CliError::Usage(format!(
                    "{path} is {0}x{0} but --dim is {dim}",
                    h.dim()
                )));
            }
            let norm = h.induced_norm();
            is_hermitian_metric(|z: &ComplexVector| norm(z), dim, tol, samples)?
        }
    };
    #[derive(Serialize)]
    struct Fit<'a> {
        dim: usize,
        metric: &'a str,
        samples: usize,
        h: &'a HermitianForm,
        residual: f64,
        tolerance: f64,
        rank: usize,
        verdict: bool,
    }
    out.record(&Fit {
        dim,
        metric,
        samples,
        h: &verdict.form,
        residual: verdict.residual,
        tolerance: verdict.tolerance,
        rank: verdict.rank,
        verdict: verdict.hermitian,
    })?;
    Ok(())
}

fn verify_cmd(out: &mut Out, ids: &[usize]) -> Res {
    let results = if ids.is_empty() {
        verify::run_all().criteria
    } else {
        ids.iter()
            .map(|&id| verify::run_criterion(id).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?
    };
    for r in &results {
        match out.format {
            Format::Json => out.record(r)?,
            Format::Csv => out.raw(&r.to_string())?,
        }
    }
    let failed = results.iter().filter(|r| r.failed()).count();
    if out.format == Format::Csv {
        out.line(&format!("{} criteria, {} failed", results.len(), failed))?;
    }
    out.flush()?;
    if failed > 0 {
        Err(CliError::Failed)
    } else {
        Ok(())
    }
}
