//! Deterministic SVG renderings of the annulus curves and the six quadratic
//! phase portraits.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use dynex_core::annulus::{gamma, push_curve, AnnulusMap, ShearParams};
use dynex_core::geometry::AnnulusPoint;
use dynex_core::planar::{eval_field, sample_curve, Branch, InvariantCurve, PlanarSystem, classify_curve, Family};

use crate::error::{write_file, CliError, Result};
use crate::svg::{Svg, Viewport, CANVAS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FigureId {
    Annulus,
    F1Below,
    F1Unit,
    F1Above,
    F2Below,
    F2Unit,
    F2Above,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Annulus,
        FigureId::F1Below,
        FigureId::F1Unit,
        FigureId::F1Above,
        FigureId::F2Below,
        FigureId::F2Unit,
        FigureId::F2Above,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Annulus => "fig2-1",
            FigureId::F1Below => "fig4-1",
            FigureId::F1Unit => "fig4-2",
            FigureId::F1Above => "fig4-3",
            FigureId::F2Below => "fig4-4",
            FigureId::F2Unit => "fig4-5",
            FigureId::F2Above => "fig4-6",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| CliError::UnknownFigure(s.to_string()))
    }
}

/// Parameters printed under each figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Caption {
    Annulus { eps1: f64, eps2: f64 },
    Portrait { family: Family, mu: f64 },
}

pub const CAPTIONS: [(FigureId, Caption); 7] = [
    (FigureId::Annulus, Caption::Annulus { eps1: 0.05, eps2: 0.4 }),
    (FigureId::F1Below, Caption::Portrait { family: Family::F1, mu: 0.5 }),
    (FigureId::F1Unit, Caption::Portrait { family: Family::F1, mu: 1.0 }),
    (FigureId::F1Above, Caption::Portrait { family: Family::F1, mu: 2.0 }),
    (FigureId::F2Below, Caption::Portrait { family: Family::F2, mu: 0.5 }),
    (FigureId::F2Unit, Caption::Portrait { family: Family::F2, mu: 1.0 }),
    (FigureId::F2Above, Caption::Portrait { family: Family::F2, mu: 2.0 }),
];

#[derive(Debug, Clone, PartialEq)]
pub enum FigureParams {
    Annulus { eps1: f64, eps2: f64, samples: usize },
    Portrait { family: Family, mu: f64, a_values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    pub params: FigureParams,
}

impl FigureSpec {
    pub fn default_for(id: FigureId) -> Self {
        let portrait = |family, mu, a: &[f64]| FigureParams::Portrait { family, mu, a_values: a.to_vec() };
        let params = match id {
            FigureId::Annulus => FigureParams::Annulus { eps1: 0.05, eps2: 0.4, samples: 512 },
            FigureId::F1Below => portrait(Family::F1, 0.5, &[-2.0, -1.0, -0.5, -0.25, 0.0, 0.5, 2.0]),
            FigureId::F1Unit => portrait(Family::F1, 1.0, &[-2.0, -1.0, 0.0, 1.0, 2.0]),
            FigureId::F1Above => portrait(Family::F1, 2.0, &[0.5, 1.0, 2.0, 3.0, 4.0]),
            FigureId::F2Below => portrait(Family::F2, 0.5, &[0.25, 0.5, 1.0, 2.0, 4.0]),
            FigureId::F2Unit => portrait(Family::F2, 1.0, &[-2.0, -1.0, 0.0, 1.0, 2.0]),
            FigureId::F2Above => portrait(Family::F2, 2.0, &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0]),
        };
        FigureSpec { id, params }
    }

    pub fn caption(&self) -> Caption {
        match self.params {
            FigureParams::Annulus { eps1, eps2, .. } => Caption::Annulus { eps1, eps2 },
            FigureParams::Portrait { family, mu, .. } => Caption::Portrait { family, mu },
        }
    }
}

/// Confirms that every default figure carries its caption parameters.
pub fn check_caption_table() -> Result<()> {
    for (id, caption) in CAPTIONS {
        let actual = FigureSpec::default_for(id).caption();
        if actual != caption {
            return Err(CliError::CaptionMismatch(format!("{id}: {actual:?} != {caption:?}")));
        }
    }
    Ok(())
}

pub fn render_figure(spec: &FigureSpec) -> Result<String> {
    match &spec.params {
        FigureParams::Annulus { eps1, eps2, samples } => render_annulus(spec.id, *eps1, *eps2, *samples),
        FigureParams::Portrait { family, mu, a_values } => render_portrait(spec.id, *family, *mu, a_values),
    }
}

pub fn emit_figure(spec: &FigureSpec, path: &Path) -> Result<()> {
    write_file(path, render_figure(spec)?.as_bytes())
}

fn circle(r: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            (r * t.cos(), r * t.sin())
        })
        .collect()
}

fn xy(pts: &[AnnulusPoint]) -> Vec<(f64, f64)> {
    pts.iter().map(|p| (p.x(), p.y())).collect()
}

fn render_annulus(id: FigureId, eps1: f64, eps2: f64, samples: usize) -> Result<String> {
    let params = ShearParams::new(eps1, eps2)?;
    let gam = gamma(samples)?;
    let rgam = push_curve(&AnnulusMap::RotationQuarter, &gam)?;
    let delta = push_curve(&AnnulusMap::shear(params), &gam)?;
    let rdelta = push_curve(&AnnulusMap::RotationQuarter, &delta)?;

    let scale = CANVAS / 11.0;
    let vp = Viewport { scale, origin: (CANVAS / 2.0, CANVAS / 2.0), x_range: (-5.5, 5.5), y_range: (-5.5, 5.5) };
    let mut svg = Svg::new();
    svg.path(&vp, &circle(1.0, 360), true, "inner-boundary", "boundary");
    svg.path(&vp, &circle(5.0, 720), true, "outer-boundary", "boundary");
    svg.path(&vp, &xy(gam.samples()), true, "gamma", "curve");
    svg.path(&vp, &xy(rgam.samples()), true, "r-gamma", "curve");
    svg.path(&vp, &xy(delta.samples()), true, "delta", "image");
    svg.path(&vp, &xy(rdelta.samples()), true, "r-delta", "image");
    svg.text(&vp, (1.6, 3.4), "γ");
    svg.text(&vp, (3.4, 1.6), "Rγ");
    svg.text(&vp, (-0.3, 2.6), "δ");
    svg.text(&vp, (-2.7, -0.3), "Rδ");
    Ok(svg.finish(&format!("{id}: eps1 = {eps1}, eps2 = {eps2}")))
}

const PORTRAIT_X: (f64, f64) = (-4.0, 4.0);
const PORTRAIT_Y: (f64, f64) = (0.0, 4.0);

fn portrait_grid(crossing: Option<f64>) -> Vec<f64> {
    let mut ys: Vec<f64> = (0..=800).map(|i| PORTRAIT_Y.1 * i as f64 / 800.0).collect();
    if let Some(c) = crossing.filter(|c| *c <= PORTRAIT_Y.1) {
        ys.push(c);
        // x behaves like a square root near the crossing
        for j in 0..24 {
            let d = 0.01 * c * 0.5f64.powi(j);
            ys.push(c - d);
            ys.push(c + d);
        }
    }
    ys.retain(|y| (PORTRAIT_Y.0..=PORTRAIT_Y.1).contains(y));
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

/// Contiguous runs of one branch inside the viewport, ordered by `y`.
fn branch_segments(curve: &InvariantCurve, ys: &[f64], branch: Branch) -> Vec<Vec<(f64, f64)>> {
    let mut segments = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for &y in ys {
        let pt = sample_curve(curve, &[y]).into_iter().find(|p| p.branch == branch);
        match pt {
            Some(p) if (PORTRAIT_X.0..=PORTRAIT_X.1).contains(&p.x) => current.push((p.x, p.y)),
            _ => {
                if current.len() >= 2 {
                    segments.push(std::mem::take(&mut current));
                } else {
                    current.clear();
                }
            }
        }
    }
    if current.len() >= 2 {
        segments.push(current);
    }
    segments
}

/// Where a right branch crosses `x = LABEL_X`, or its highest point when it
/// stays left of that line.
fn label_anchor(seg: &[(f64, f64)]) -> (f64, f64) {
    const LABEL_X: f64 = 3.2;
    match seg.iter().find(|p| p.0 >= LABEL_X) {
        Some(&(x, y)) => (x + 0.05, y - 0.12),
        None => {
            let top = seg.iter().copied().fold(seg[0], |b, p| if p.1 > b.1 { p } else { b });
            (top.0 + 0.05, top.1)
        }
    }
}

fn render_portrait(id: FigureId, family: Family, mu: f64, a_values: &[f64]) -> Result<String> {
    let sys = PlanarSystem::new(family, mu)?;
    let vp = Viewport {
        scale: 100.0,
        origin: (CANVAS / 2.0, CANVAS / 2.0 + 200.0),
        x_range: PORTRAIT_X,
        y_range: PORTRAIT_Y,
    };
    let mut svg = Svg::new();
    svg.line(&vp, (PORTRAIT_X.0, 0.0), (PORTRAIT_X.1, 0.0), "boundary");
    svg.line(&vp, (0.0, 0.0), (0.0, PORTRAIT_Y.1), "axis");
    for x in [-2.0, 2.0] {
        let (f, g) = eval_field(&sys, x, 0.0)?;
        svg.arrowhead(&vp, (x, 0.0), (f, g), 12.0);
    }
    for &a in a_values {
        let curve = InvariantCurve::new(family, mu, a)?;
        let crossing = classify_curve(&curve)?.axis_crossing;
        let ys = portrait_grid(crossing);
        for branch in [Branch::Left, Branch::Right] {
            for (k, seg) in branch_segments(&curve, &ys, branch).into_iter().enumerate() {
                let path_id = format!("a{a}-{}-{k}", branch.name());
                svg.path(&vp, &seg, false, &path_id, "curve");
                let mid = seg[seg.len() / 2];
                if mid.1 > 0.0 {
                    let (f, g) = eval_field(&sys, mid.0, mid.1)?;
                    svg.arrowhead(&vp, mid, (f, g), 10.0);
                }
                if branch == Branch::Right && k == 0 {
                    svg.text(&vp, label_anchor(&seg), &format!("a={a}"));
                }
            }
        }
    }
    Ok(svg.finish(&format!("{id}: {} with mu = {mu}", family.name())))
}
