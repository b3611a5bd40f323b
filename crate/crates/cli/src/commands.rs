use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gllog::gallery::{build, GallerySpec};
use gllog::io::{read_matrix_file, read_vector_file};
use gllog::krylov::log_action_with_set;
use gllog::linalg::largest_eigpair;
use gllog::logm::{
    logm_fixed, logm_with_set, select_params, select_params_recompute, BoundMode, LogmOptions, LogmReport, ParamChoice,
};
use gllog::matrix::vec_norm;
use gllog::quadrature::gauss_legendre;
use gllog::scalar::scalar_error_scan;
use gllog::spectral::{branch_cut_clearance, fov_boundary, pseudo_contour, resolvent_grid, SetKind, SpectralSet};
use gllog::{ComplexMatrix, Error, Result, C64};

use crate::output::{emit, matrix_text, num, Csv};
use crate::{BoundArgs, FovArgs, GalleryArgs, KrylovArgs, LogmArgs, NodesArgs, PseudoArgs, SelectArgs, SetMode};

fn load(path: &std::path::Path) -> Result<ComplexMatrix> {
    read_matrix_file(path)
}

/// Bounding box of the field of values grown by `pad` on every side; the
/// epsilon-pseudospectrum lies inside it whenever `pad > eps`.
pub fn fov_box(fov: &SpectralSet, pad: f64) -> ((f64, f64), (f64, f64)) {
    let b = fov.boundary();
    let lo_re = b.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let hi_re = b.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let lo_im = b.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let hi_im = b.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    ((lo_re - pad, hi_re + pad), (lo_im - pad, hi_im + pad))
}

fn box_for(
    a: &ComplexMatrix,
    eps: f64,
    re: Option<(f64, f64)>,
    im: Option<(f64, f64)>,
    angles: usize,
) -> Result<((f64, f64), (f64, f64))> {
    if let (Some(re), Some(im)) = (re, im) {
        return Ok((re, im));
    }
    let fov = fov_boundary(a, angles)?;
    let pad = 2.0 * eps + 0.01 * fov.diameter().max(eps);
    let (dre, dim) = fov_box(&fov, pad);
    Ok((re.unwrap_or(dre), im.unwrap_or(dim)))
}

/// `[lambda_min, lambda_max]` of the Hermitian part.
fn hermitian_range(a: &ComplexMatrix) -> Result<(f64, f64)> {
    let h = a.hermitian_part();
    let hi = largest_eigpair(&h)?.0;
    let lo = -largest_eigpair(&h.scale_real(-1.0))?.0;
    Ok((lo, hi))
}

fn spectral_set(a: &ComplexMatrix, args: &SelectArgs) -> Result<SpectralSet> {
    let angles = args.fov_angles as usize;
    match args.set_mode {
        SetMode::Fov => {
            let set = fov_boundary(a, angles)?;
            let clearance = branch_cut_clearance(&set);
            if clearance <= 0.0 {
                return Err(Error::FovCrossesBranchCut { clearance });
            }
            Ok(set)
        }
        SetMode::Pseudo(eps) => {
            let (re, im) = box_for(a, eps, args.re, args.im, angles)?;
            let grid = resolvent_grid(a, re, im, args.nx as usize, args.ny as usize)?;
            let comps = pseudo_contour(&grid, eps)?.into_iter().map(|c| c.boundary().to_vec()).collect();
            SpectralSet::from_components(SetKind::Pseudo(eps), comps, a.rows())
        }
        SetMode::Interval(bounds) => {
            let (lo, hi) = match bounds {
                Some(b) => b,
                None => hermitian_range(a)?,
            };
            SpectralSet::interval(lo, hi, a.rows())
        }
    }
}

fn options(args: &SelectArgs) -> Result<LogmOptions> {
    if args.recompute && args.set_mode != SetMode::Fov {
        return Err(Error::InvalidParams("--recompute works with the field of values only".into()));
    }
    Ok(LogmOptions {
        s_max: args.s_max,
        k_max: args.k_max as usize,
        fov_angles: args.fov_angles as usize,
        mode: if args.recompute { BoundMode::Recompute } else { BoundMode::Literal },
        compute_kappa: true,
    })
}

fn set_label(kind: SetKind) -> String {
    match kind {
        SetKind::Fov => "fov".into(),
        SetKind::Pseudo(eps) => format!("pseudo:{eps:e}"),
        SetKind::Interval => "interval".into(),
    }
}

fn choose(a: &ComplexMatrix, args: &SelectArgs) -> Result<(ParamChoice, Option<SpectralSet>)> {
    let opts = options(args)?;
    if args.recompute {
        return Ok((select_params_recompute(a, args.tol, &opts)?, None));
    }
    let set = spectral_set(a, args)?;
    Ok((select_params(&set, args.tol, opts.s_max, opts.k_max)?, Some(set)))
}

fn report_text(
    n: usize,
    args: &SelectArgs,
    choice: &ParamChoice,
    set: Option<&SpectralSet>,
    rep: Option<&LogmReport>,
) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("n", n.to_string());
    kv("tol", num(args.tol));
    kv("mode", if args.recompute { "recompute".into() } else { "literal".into() });
    if let Some(set) = set {
        kv("set", set_label(set.kind()));
        kv("set_points", set.len().to_string());
        kv("clearance", num(branch_cut_clearance(set)));
    } else {
        kv("set", "fov".into());
    }
    kv("s", choice.s.to_string());
    kv("k", choice.k.to_string());
    kv("cost", format!("{}/3", choice.cost_thirds()));
    kv("cost_floor", choice.cost_floor().to_string());
    kv("predicted_error", choice.predicted_error.map_or("none".into(), num));
    if let Some(r) = rep {
        kv("kappa", r.kappa.map_or("none".into(), num));
        kv("achievable_accuracy", r.achievable_accuracy().map_or("none".into(), num));
        let worst = r.sqrt_residuals.iter().copied().fold(0.0, f64::max);
        kv("sqrt_residual_max", num(worst));
        kv("real_output", r.x.is_real().to_string());
    }
    out
}

pub fn params(args: &SelectArgs) -> Result<()> {
    let a = load(&args.input)?;
    let (choice, set) = choose(&a, args)?;
    emit(args.report.as_deref(), &report_text(a.rows(), args, &choice, set.as_ref(), None))
}

pub fn logm(args: &LogmArgs) -> Result<()> {
    let sel = &args.select;
    let a = load(&sel.input)?;
    let (rep, set) = match (args.s, args.k) {
        (Some(s), Some(k)) => (logm_fixed(&a, s, k as usize)?, None),
        _ if sel.recompute => {
            let opts = options(sel)?;
            (gllog::logm::logm_auto_with(&a, sel.tol, &opts)?, None)
        }
        _ => {
            let set = spectral_set(&a, sel)?;
            (logm_with_set(&a, &set, sel.tol, &options(sel)?)?, Some(set))
        }
    };
    emit(args.out.as_deref(), &matrix_text(&rep.x, args.format))?;
    let text = report_text(a.rows(), sel, &rep.choice, set.as_ref(), Some(&rep));
    match &sel.report {
        Some(p) => emit(Some(p), &text),
        // matrix already on stdout: keep the report apart
        None if args.out.is_none() => {
            eprint!("{text}");
            Ok(())
        }
        None => emit(None, &text),
    }
}

pub fn bound(args: &BoundArgs) -> Result<()> {
    if !(args.zmin < args.zmax) || args.zmin <= -1.0 {
        return Err(Error::InvalidParams(format!("need -1 < zmin < zmax, got [{}, {}]", args.zmin, args.zmax)));
    }
    let mut csv = Csv::new(&["z", "error", "bound"]);
    for r in scalar_error_scan(args.k as usize, args.zmin, args.zmax, args.samples as usize)? {
        csv.row(&[num(r.z), num(r.error), num(r.bound)]);
    }
    emit(args.out.as_deref(), &csv.finish())
}

fn set_csv(set: &SpectralSet) -> String {
    let mut csv = Csv::new(&["component", "re", "im"]);
    for (c, pts) in set.components().enumerate() {
        for z in pts {
            csv.row(&[c.to_string(), num(z.re), num(z.im)]);
        }
    }
    csv.finish()
}

pub fn fov(args: &FovArgs) -> Result<()> {
    let a = load(&args.input)?;
    let set = fov_boundary(&a, args.fov_angles as usize)?;
    emit(args.out.as_deref(), &set_csv(&set))
}

pub fn pseudo(args: &PseudoArgs) -> Result<()> {
    if !(args.eps > 0.0) || !args.eps.is_finite() {
        return Err(Error::InvalidParams(format!("epsilon must be positive, got {}", args.eps)));
    }
    let a = load(&args.input)?;
    let (re, im) = box_for(&a, args.eps, args.re, args.im, args.fov_angles as usize)?;
    let grid = resolvent_grid(&a, re, im, args.nx as usize, args.ny as usize)?;
    if let Some(path) = &args.grid_out {
        let mut csv = Csv::new(&["re", "im", "inv_sigma_min"]);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let z = grid.point(i, j);
                csv.row(&[num(z.re), num(z.im), num(grid.value(i, j))]);
            }
        }
        emit(Some(path), &csv.finish())?;
    }
    let comps = pseudo_contour(&grid, args.eps)?.into_iter().map(|c| c.boundary().to_vec()).collect();
    let set = SpectralSet::from_components(SetKind::Pseudo(args.eps), comps, a.rows())?;
    emit(args.out.as_deref(), &set_csv(&set))
}

fn start_vector(args: &KrylovArgs, n: usize) -> Result<Vec<C64>> {
    if let Some(p) = &args.vector {
        let v = read_vector_file(p)?;
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("vector of length {} for a {n}x{n} matrix", v.len())));
        }
        return Ok(v);
    }
    if args.ones {
        return Ok(vec![C64::new(1.0, 0.0); n]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    Ok((0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect())
}

pub fn krylov(args: &KrylovArgs) -> Result<()> {
    if args.kmin > args.kmax {
        return Err(Error::InvalidParams(format!("empty k range {}..{}", args.kmin, args.kmax)));
    }
    let a = load(&args.input)?;
    let v = start_vector(args, a.rows())?;
    let fov = fov_boundary(&a, args.fov_angles as usize)?;
    let opts = LogmOptions { fov_angles: args.fov_angles as usize, compute_kappa: false, ..LogmOptions::default() };
    let reference = logm_with_set(&a, &fov, args.tol, &opts)?.x.matvec(&v);
    let mut csv = Csv::new(&["k", "basis_dim", "error", "bound", "breakdown"]);
    for k in args.kmin..=args.kmax {
        let act = log_action_with_set(&a, &v, k as usize, &fov)?;
        let diff: Vec<C64> = act.f.iter().zip(&reference).map(|(x, y)| x - y).collect();
        csv.row(&[
            k.to_string(),
            act.basis_dim.to_string(),
            num(vec_norm(&diff)),
            num(act.bound),
            act.breakdown.to_string(),
        ]);
    }
    emit(args.out.as_deref(), &csv.finish())
}

pub fn gallery(args: &GalleryArgs) -> Result<()> {
    let a = build(&GallerySpec::parse(&args.family, args.n, &args.param)?)?;
    emit(args.out.as_deref(), &matrix_text(&a, args.format))
}

pub fn nodes(args: &NodesArgs) -> Result<()> {
    let rule = gauss_legendre(args.k as usize)?;
    let mut csv = Csv::new(&["i", "node", "weight"]);
    for (i, (x, w)) in rule.iter().enumerate() {
        csv.row(&[i.to_string(), num(x), num(w)]);
    }
    emit(args.out.as_deref(), &csv.finish())
}
