//! Gauss-map searches: stationary points of linear phases, nearest attained
//! normal directions, and normal-cone coverage of the direction sphere.
//!
//! All searches start from a uniform parameter grid. Stationary points of
//! `u ↦ χ(u)·e` are the zeros of `F(u) = Jᵀe`; they are polished by a
//! projected Levenberg–Marquardt iteration on `|F|²` whose Jacobian is the
//! Hessian `Σ_k e_k ∂²χ_k`. The angle between the normal line and `e` is
//! `asin √(Fᵀ I⁻¹ F)`, which stays accurate for tiny angles.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::shape::{chart_shape, ShapeData};
use crate::error::{Error, Result};
use crate::linalg;
use crate::surface::{Chart, Region, RegionPiece, Surface};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SearchOptions {
    pub seeds_per_axis: usize,
    /// Largest angle (radians) between the normal line and `e` accepted as
    /// a stationary point.
    pub angle_tol: f64,
    /// Parameter distance below which two solutions on one chart merge.
    pub merge_distance: f64,
    /// Solutions that reach a free side with an angle below this are
    /// reported as boundary tangencies.
    pub boundary_angle: f64,
    /// Seeds polished per query in [`NormalCone::nearest`].
    pub refine_candidates: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seeds_per_axis: 32,
            angle_tol: 1e-9,
            merge_distance: 1e-8,
            boundary_angle: 1e-6,
            refine_candidates: 4,
        }
    }
}

/// The attained normal closest to a query direction.
#[derive(Debug, Clone, Serialize)]
pub struct NearestNormal {
    /// Angle between the query and the nearest attained normal line, in `[0, π/2]`.
    pub angle: f64,
    pub chart: usize,
    pub u: Vec<f64>,
}

struct PieceSeeds<'a> {
    piece: RegionPiece<'a>,
    /// Seeds per axis.
    n: usize,
    periodic: Vec<bool>,
    seeds: Vec<Vec<f64>>,
    /// Unit normals (chart orientation), `None` outside the region or where
    /// the chart degenerates.
    normals: Vec<Option<Vec<f64>>>,
}

/// Cached Gauss-map samples of a region, reused across many directions.
pub struct NormalCone<'a> {
    surface: &'a Surface,
    pieces: Vec<PieceSeeds<'a>>,
    opts: SearchOptions,
}

impl<'a> NormalCone<'a> {
    pub fn new(surface: &'a Surface, region: Region<'a>, opts: SearchOptions) -> Result<Self> {
        if opts.seeds_per_axis < 2 {
            return Err(Error::invalid("at least 2 seeds per axis are required"));
        }
        let pieces = region
            .pieces(surface)?
            .into_iter()
            .map(|piece| {
                let chart = &surface.charts()[piece.chart];
                let seeds = piece.bounds.grid(opts.seeds_per_axis);
                let normals = seeds.iter().map(|u| if piece.admits(u) { chart.unit_normal(u) } else { None }).collect();
                let periodic = piece.bounds.axes.iter().map(|a| a.periodic).collect();
                PieceSeeds { piece, n: opts.seeds_per_axis, periodic, seeds, normals }
            })
            .collect();
        Ok(NormalCone { surface, pieces, opts })
    }

    pub fn surface(&self) -> &Surface {
        self.surface
    }

    pub fn options(&self) -> &SearchOptions {
        &self.opts
    }

    /// All points of the region whose normal is parallel to `±e`, oriented
    /// toward `e`, sorted by chart and parameter.
    ///
    /// Fails with [`Error::BoundaryTangency`] when `±e` is attained only on a
    /// free side of the region.
    pub fn stationary_points(&self, e: &[f64]) -> Result<Vec<ShapeData>> {
        let e = unit(e, self.surface.ambient_dim())?;
        let mut found: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::new();
        let mut boundary: Option<(usize, Vec<f64>)> = None;
        for ps in &self.pieces {
            let chart = &self.surface.charts()[ps.piece.chart];
            let merits: Vec<f64> = ps
                .normals
                .iter()
                .map(|n| n.as_ref().map_or(f64::INFINITY, |n| 1.0 - linalg::dot(n, &e).powi(2)))
                .collect();
            let starts: Vec<usize> = (0..ps.seeds.len()).filter(|&i| ps.is_local_min(&merits, i)).collect();
            let runs: Vec<Polished> = starts.par_iter().map(|&i| polish(chart, &ps.piece, &e, &ps.seeds[i])).collect();
            for r in runs {
                let on_free = ps.piece.bounds.on_free_side(&r.u);
                if on_free {
                    if r.angle <= self.opts.boundary_angle && boundary.is_none() {
                        boundary = Some((ps.piece.chart, r.u.clone()));
                    }
                    continue;
                }
                if r.angle > self.opts.angle_tol || !ps.piece.admits(&r.u) {
                    continue;
                }
                let dup = found.iter().any(|(c, u, x)| {
                    (*c == ps.piece.chart && ps.piece.bounds.distance(u, &r.u) <= self.opts.merge_distance)
                        || same_position(x, &chart.embed(&r.u))
                });
                if !dup {
                    let x = chart.embed(&r.u);
                    found.push((ps.piece.chart, r.u, x));
                }
            }
        }
        if found.is_empty() {
            if let Some((chart, u)) = boundary {
                return Err(Error::BoundaryTangency { direction: e, chart, u });
            }
        }
        found.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| lex(&a.1, &b.1)));
        found.into_iter().map(|(c, u, _)| chart_shape(&self.surface.charts()[c], c, &u, &e)).collect()
    }

    /// Nearest attained normal line to `e` over the region.
    ///
    /// The best seeds are polished by minimising `|Jᵀe|`, so the reported
    /// angle is exact at stationary points and an upper bound elsewhere.
    pub fn nearest(&self, e: &[f64]) -> Result<NearestNormal> {
        let e = unit(e, self.surface.ambient_dim())?;
        let mut ranked: Vec<(f64, usize, usize)> = Vec::new();
        for (p, ps) in self.pieces.iter().enumerate() {
            for (i, n) in ps.normals.iter().enumerate() {
                if let Some(n) = n {
                    ranked.push((linalg::dot(n, &e).abs(), p, i));
                }
            }
        }
        if ranked.is_empty() {
            return Err(Error::invalid("region contains no regular sample points"));
        }
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut best: Option<NearestNormal> = None;
        for &(_, p, i) in ranked.iter().take(self.opts.refine_candidates.max(1)) {
            let ps = &self.pieces[p];
            let chart = &self.surface.charts()[ps.piece.chart];
            let r = polish(chart, &ps.piece, &e, &ps.seeds[i]);
            let seed_angle = angle_from_normal(ps.normals[i].as_deref(), &e);
            let (angle, u) = if r.angle <= seed_angle { (r.angle, r.u) } else { (seed_angle, ps.seeds[i].clone()) };
            if best.as_ref().map_or(true, |b| angle < b.angle) {
                best = Some(NearestNormal { angle, chart: ps.piece.chart, u });
            }
        }
        Ok(best.expect("at least one candidate"))
    }

    /// Whether the normal line of some region point lies within `angle_tol`
    /// of `ξ`.
    pub fn contains(&self, xi: &[f64], angle_tol: f64) -> Result<bool> {
        Ok(self.nearest(xi)?.angle <= angle_tol)
    }
}

impl PieceSeeds<'_> {
    /// Grid index `i` is no worse than its axis neighbours.
    fn is_local_min(&self, merits: &[f64], i: usize) -> bool {
        let v = merits[i];
        if !v.is_finite() {
            return false;
        }
        let m = self.periodic.len();
        let mut stride = 1;
        for ax in (0..m).rev() {
            let idx = (i / stride) % self.n;
            for step in [-1i64, 1] {
                let j = idx as i64 + step;
                let j = if self.periodic[ax] {
                    j.rem_euclid(self.n as i64)
                } else if j < 0 || j >= self.n as i64 {
                    continue;
                } else {
                    j
                };
                let k = i - idx * stride + j as usize * stride;
                if merits[k] < v {
                    return false;
                }
            }
            stride *= self.n;
        }
        true
    }
}

fn unit(e: &[f64], d: usize) -> Result<Vec<f64>> {
    if e.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: e.len() });
    }
    let n = linalg::norm(e);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::invalid("direction must be nonzero and finite"));
    }
    Ok(e.iter().map(|v| v / n).collect())
}

fn same_position(a: &[f64], b: &[f64]) -> bool {
    let scale = linalg::norm(a).max(1.0);
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() <= 1e-8 * scale
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

fn angle_from_normal(n: Option<&[f64]>, e: &[f64]) -> f64 {
    match n {
        Some(n) => linalg::dot(n, e).abs().min(1.0).acos(),
        None => std::f64::consts::FRAC_PI_2,
    }
}

struct Polished {
    u: Vec<f64>,
    angle: f64,
}

struct Local {
    f: Vec<f64>,
    /// `Σ_k e_k ∂_a∂_b χ_k`.
    h: Vec<f64>,
    sin2: f64,
}

fn local(chart: &Chart, e: &[f64], u: &[f64], with_hessian: bool) -> Option<Local> {
    let d = chart.ambient_dim();
    let m = d - 1;
    let jac = chart.jacobian(u);
    let f: Vec<f64> = (0..m).map(|a| (0..d).map(|k| jac[k * m + a] * e[k]).sum()).collect();
    let mut g = vec![0.0; m * m];
    linalg::gram(d, m, &jac, &mut g);
    let mut x = f.clone();
    if !linalg::solve_in_place(m, &mut g, &mut x) {
        return None;
    }
    let sin2 = linalg::dot(&f, &x).max(0.0);
    let h = if with_hessian {
        let hess = chart.hessian(u);
        (0..m * m).map(|ab| linalg::dot(&hess[ab * d..(ab + 1) * d], e)).collect()
    } else {
        Vec::new()
    };
    Some(Local { f, h, sin2 })
}

/// Projected Levenberg–Marquardt on `|Jᵀe|²` inside the piece.
fn polish(chart: &Chart, piece: &RegionPiece<'_>, e: &[f64], start: &[f64]) -> Polished {
    let m = chart.param_dim();
    let bounds = &piece.bounds;
    let mut u = start.to_vec();
    let Some(mut cur) = local(chart, e, &u, true) else {
        return Polished { u, angle: std::f64::consts::FRAC_PI_2 };
    };
    let scale: f64 = bounds.axes.iter().map(|a| a.width()).fold(0.0, f64::max);
    let mut mu = 1e-6;
    for _ in 0..200 {
        if cur.sin2 <= 1e-30 {
            break;
        }
        // axes pinned at a side whose gradient pushes outward stay fixed
        let grad: Vec<f64> = (0..m).map(|a| (0..m).map(|b| cur.h[b * m + a] * cur.f[b]).sum()).collect();
        let free: Vec<usize> = (0..m)
            .filter(|&a| {
                let ax = &bounds.axes[a];
                if ax.periodic {
                    return true;
                }
                let tol = 1e-12 * ax.width();
                !((u[a] <= ax.lo + tol && grad[a] > 0.0) || (u[a] >= ax.hi - tol && grad[a] < 0.0))
            })
            .collect();
        if free.is_empty() {
            break;
        }
        let k = free.len();
        let mut improved = false;
        let mut step_norm = 0.0;
        while mu < 1e12 {
            let mut a = vec![0.0; k * k];
            let mut rhs = vec![0.0; k];
            for (i, &p) in free.iter().enumerate() {
                for (j, &q) in free.iter().enumerate() {
                    a[i * k + j] = (0..m).map(|r| cur.h[r * m + p] * cur.h[r * m + q]).sum();
                }
                rhs[i] = -grad[p];
            }
            let diag_max = (0..k).map(|i| a[i * k + i]).fold(0.0f64, f64::max).max(1e-300);
            for i in 0..k {
                a[i * k + i] += mu * diag_max.max(a[i * k + i]);
            }
            if !linalg::solve_in_place(k, &mut a, &mut rhs) {
                mu *= 10.0;
                continue;
            }
            let mut trial = u.clone();
            for (i, &p) in free.iter().enumerate() {
                trial[p] += rhs[i];
            }
            bounds.project(&mut trial);
            let mut ok = piece.admits(&trial);
            let mut shrink = 0;
            while !ok && shrink < 30 {
                for (t, s) in trial.iter_mut().zip(&u) {
                    *t = 0.5 * (*t + s);
                }
                ok = piece.admits(&trial);
                shrink += 1;
            }
            let next = if ok { local(chart, e, &trial, true) } else { None };
            match next {
                Some(n) if linalg::dot(&n.f, &n.f) < linalg::dot(&cur.f, &cur.f) => {
                    step_norm = bounds.distance(&trial, &u);
                    u = trial;
                    cur = n;
                    mu = (mu * 0.2).max(1e-15);
                    improved = true;
                    break;
                }
                _ => mu *= 8.0,
            }
        }
        if !improved || step_norm <= 1e-15 * scale.max(1.0) {
            break;
        }
    }
    Polished { u, angle: cur.sin2.sqrt().min(1.0).asin() }
}

/// Stationary points of `u ↦ χ(u)·e` on `region` with default options.
pub fn stationary_points(surface: &Surface, region: Region<'_>, e: &[f64]) -> Result<Vec<ShapeData>> {
    NormalCone::new(surface, region, SearchOptions::default())?.stationary_points(e)
}

/// Whether `ξ/|ξ|` is within `angular_tol` of a normal line of the region.
pub fn normal_cone_membership(surface: &Surface, region: Region<'_>, xi: &[f64], angular_tol: f64) -> Result<bool> {
    NormalCone::new(surface, region, SearchOptions::default())?.contains(xi, angular_tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageCell {
    pub direction: Vec<f64>,
    /// Solid-angle weight of the cell.
    pub weight: f64,
    pub member: bool,
    pub nearest_angle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub resolution: f64,
    pub tolerance: f64,
    /// Solid-angle fraction of `S^{d-1}` whose directions are attained up to sign.
    pub fraction: f64,
    pub cells: Vec<CoverageCell>,
}

impl CoverageReport {
    pub fn uncovered(&self) -> impl Iterator<Item = &CoverageCell> {
        self.cells.iter().filter(|c| !c.member)
    }

    /// CSV with columns `e_1..e_d, member, nearest_angle`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let d = self.cells.first().map_or(0, |c| c.direction.len());
        let mut header: Vec<String> = (1..=d).map(|i| format!("e_{i}")).collect();
        header.push("member".into());
        header.push("nearest_angle".into());
        writeln!(out, "{}", header.join(","))?;
        for c in &self.cells {
            for v in &c.direction {
                write!(out, "{v:.17e},")?;
            }
            writeln!(out, "{},{:.17e}", u8::from(c.member), c.nearest_angle)?;
        }
        Ok(())
    }
}

/// Unit directions tessellating one half of `S^{d-1}`, with solid-angle weights.
///
/// Cells are the `+` faces of the cube `[-1,1]^d` cut into `k^{d-1}` equal
/// squares (`k` a power of two with `2/k ≤ resolution`) and projected
/// radially. Antipodal directions give the same membership, so the half
/// sphere carries the full fraction. Weights are exact solid angles for
/// `d ≤ 3` and midpoint estimates above.
pub fn direction_cells(d: usize, resolution: f64) -> Vec<(Vec<f64>, f64)> {
    let m = d - 1;
    let mut k = 1usize;
    while 2.0 / k as f64 > resolution {
        k *= 2;
    }
    let h = 2.0 / k as f64;
    let total = k.pow(m as u32);
    let mut out = Vec::with_capacity(d * total);
    for axis in 0..d {
        for cell in 0..total {
            let mut y = vec![0.0; d];
            y[axis] = 1.0;
            let mut rest = cell;
            let mut r2 = 1.0;
            let mut lo = vec![0.0; m];
            for j in (0..m).rev() {
                let idx = rest % k;
                rest /= k;
                lo[j] = -1.0 + h * idx as f64;
                let t = lo[j] + 0.5 * h;
                y[if j < axis { j } else { j + 1 }] = t;
                r2 += t * t;
            }
            let r = r2.sqrt();
            y.iter_mut().for_each(|v| *v /= r);
            let weight = match m {
                1 => (lo[0] + h).atan() - lo[0].atan(),
                2 => {
                    let f = |x: f64, z: f64| (x * z / (1.0 + x * x + z * z).sqrt()).atan();
                    let (x1, x2, z1, z2) = (lo[0], lo[0] + h, lo[1], lo[1] + h);
                    f(x2, z2) - f(x1, z2) - f(x2, z1) + f(x1, z1)
                }
                _ => h.powi(m as i32) * r2.powf(-0.5 * d as f64),
            };
            out.push((y, weight));
        }
    }
    out
}

/// Fraction of directions (up to sign) attained as normals on `region`,
/// tested at the cell centres of a tessellation of angular size `resolution`.
pub fn normal_cone_coverage(surface: &Surface, region: Region<'_>, resolution: f64) -> Result<CoverageReport> {
    coverage_with(surface, region, resolution, 1e-3, SearchOptions::default())
}

pub fn coverage_with(
    surface: &Surface,
    region: Region<'_>,
    resolution: f64,
    tolerance: f64,
    opts: SearchOptions,
) -> Result<CoverageReport> {
    if !(resolution > 0.0 && resolution <= std::f64::consts::PI / 8.0 + 1e-15) {
        return Err(Error::invalid("angular resolution must lie in (0, π/8]"));
    }
    let cone = NormalCone::new(surface, region, opts)?;
    let dirs = direction_cells(surface.ambient_dim(), resolution);
    let cells: Vec<CoverageCell> = dirs
        .into_par_iter()
        .map(|(direction, weight)| {
            let nearest = cone.nearest(&direction)?;
            Ok(CoverageCell { direction, weight, member: nearest.angle <= tolerance, nearest_angle: nearest.angle })
        })
        .collect::<Result<_>>()?;
    let total: f64 = cells.iter().map(|c| c.weight).sum();
    let covered: f64 = cells.iter().filter(|c| c.member).map(|c| c.weight).sum();
    Ok(CoverageReport { resolution, tolerance, fraction: covered / total, cells })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::surface::catalog;

    #[test]
    fn sphere_poles() {
        let s = catalog::sphere(3).unwrap();
        let pts = stationary_points(&s, Region::Whole, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(pts.len(), 2);
        let zs: Vec<f64> = pts.iter().map(|p| p.point.position[2]).collect();
        assert!(zs.iter().any(|z| (z - 1.0).abs() < 1e-12) && zs.iter().any(|z| (z + 1.0).abs() < 1e-12));
    }

    #[test]
    fn sphere_seam_direction_is_found_once() {
        // (1,1,0)/√2 lies on a cube edge, shared by two charts
        let s = catalog::sphere(3).unwrap();
        let pts = stationary_points(&s, Region::Whole, &[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn figure1_stationary_points() {
        let c = catalog::figure1_curve().unwrap();
        // height b(θ): b' = a = cos θ + 2 cos 2θ = 0  ⇒  cos θ = (−1 ± √33)/8
        let pts = stationary_points(&c, Region::Whole, &[0.0, 1.0]).unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            let ct = p.point.u[0].cos();
            let r1 = (-1.0 + 33f64.sqrt()) / 8.0;
            let r2 = (-1.0 - 33f64.sqrt()) / 8.0;
            assert!((ct - r1).abs() < 1e-10 || (ct - r2).abs() < 1e-10);
        }
        // height a(θ): a' = −sin θ (1 + 8 cos θ) = 0
        let pts = stationary_points(&c, Region::Whole, &[1.0, 0.0]).unwrap();
        let mut th: Vec<f64> = pts.iter().map(|p| p.point.u[0]).collect();
        th.sort_by(f64::total_cmp);
        let b = (-1.0f64 / 8.0).acos();
        let want = [0.0, b, PI, 2.0 * PI - b];
        assert_eq!(th.len(), 4);
        for (x, y) in th.iter().zip(want) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn cap_outside_aperture_is_empty_and_edge_is_boundary() {
        let alpha = PI / 6.0;
        let s = catalog::spherical_cap(3, alpha).unwrap();
        let beyond = alpha + 0.1;
        let e = [beyond.sin(), 0.0, beyond.cos()];
        assert!(stationary_points(&s, Region::Whole, &e).unwrap().is_empty());
        let e = [alpha.sin(), 0.0, alpha.cos()];
        assert!(matches!(stationary_points(&s, Region::Whole, &e), Err(Error::BoundaryTangency { .. })));
        let cone = NormalCone::new(&s, Region::Whole, SearchOptions::default()).unwrap();
        assert!(cone.contains(&[0.0, 0.0, 1.0], 1e-3).unwrap());
        assert!(cone.contains(&[0.0, 0.0, -2.0], 1e-3).unwrap());
        assert!(!cone.contains(&[beyond.sin(), 0.0, -beyond.cos()], 1e-3).unwrap());
        let near = cone.nearest(&[beyond.sin(), 0.0, beyond.cos()]).unwrap();
        assert!((near.angle - 0.1).abs() < 1e-6, "{}", near.angle);
    }

    #[test]
    fn direction_cells_cover_the_half_sphere() {
        for d in [2, 3, 4] {
            let cells = direction_cells(d, PI / 16.0);
            let w: f64 = cells.iter().map(|c| c.1).sum();
            // half of |S^{d-1}|: π, 2π, π²
            let half = [PI, 2.0 * PI, PI * PI][d - 2];
            assert!((w - half).abs() < if d < 4 { 1e-12 } else { 0.02 } * half, "d = {d}: {w}");
        }
    }
}
