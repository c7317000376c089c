//! The closed set `S` as typed planar pieces.
//!
//! `S` consists of the disk `G_0 = {|z-2| <= 1}`, the disks
//! `G_k = {|z-(4k+2)| <= 1}` and `B_k = {|z+(4k+2)| <= 1}` each with two
//! vertical rays `|Im z| >= 1` on their centre line, and the vertical lines
//! `L_k: Re z = 4k`, `M_k: Re z = -4k` for `k >= 1`.
//!
//! Separation between pieces is computed exactly (every distance is of the
//! form `sqrt(n) - m` with integer `n`, `m`); only the flood-fill witness for
//! the connectivity conditions works on a floating-point raster.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use num_complex::{Complex, Complex64};
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("region index must be >= 1, got {0}")]
    InvalidIndex(i64),
    #[error("{0} is a line and has no centre")]
    NoCenter(Region),
}

/// One symbolic piece of `S`.
///
/// `Base` stands for `G_0` together with every line `L_k`, `M_k`: all
/// schedules treat that union as a single absorbing sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Region {
    Base,
    GDisk(i64),
    BDisk(i64),
    LineL(i64),
    LineM(i64),
}

impl Region {
    pub fn g(k: i64) -> Result<Self, GeometryError> {
        Self::checked(k).map(Region::GDisk)
    }

    pub fn b(k: i64) -> Result<Self, GeometryError> {
        Self::checked(k).map(Region::BDisk)
    }

    pub fn line_l(k: i64) -> Result<Self, GeometryError> {
        Self::checked(k).map(Region::LineL)
    }

    pub fn line_m(k: i64) -> Result<Self, GeometryError> {
        Self::checked(k).map(Region::LineM)
    }

    fn checked(k: i64) -> Result<i64, GeometryError> {
        if k >= 1 {
            Ok(k)
        } else {
            Err(GeometryError::InvalidIndex(k))
        }
    }

    /// Index of a disk region, `None` for `Base` and lines.
    pub fn disk_index(self) -> Option<i64> {
        match self {
            Region::GDisk(k) | Region::BDisk(k) => Some(k),
            _ => None,
        }
    }

    /// Lines collapse onto `Base`, everything else is unchanged.
    pub fn symbol(self) -> Region {
        match self {
            Region::LineL(_) | Region::LineM(_) => Region::Base,
            r => r,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Base => f.write_str("Base"),
            Region::GDisk(k) => write!(f, "G{k}"),
            Region::BDisk(k) => write!(f, "B{k}"),
            Region::LineL(k) => write!(f, "L{k}"),
            Region::LineM(k) => write!(f, "M{k}"),
        }
    }
}

pub fn center(r: Region) -> Result<Complex<i64>, GeometryError> {
    match r {
        Region::Base => Ok(Complex::new(2, 0)),
        Region::GDisk(k) => Ok(Complex::new(4 * k + 2, 0)),
        Region::BDisk(k) => Ok(Complex::new(-(4 * k + 2), 0)),
        Region::LineL(_) | Region::LineM(_) => Err(GeometryError::NoCenter(r)),
    }
}

/// Membership in the closed point set of a region. `Base` means `G_0` only
/// here; the lines are their own variants.
pub fn contains(r: Region, z: Complex64) -> bool {
    let disk_with_rays = |c: f64| (z - c).norm() <= 1.0 || (z.re == c && z.im.abs() >= 1.0);
    match r {
        Region::Base => (z - 2.0).norm() <= 1.0,
        Region::GDisk(k) => disk_with_rays((4 * k + 2) as f64),
        Region::BDisk(k) => disk_with_rays(-((4 * k + 2) as f64)),
        Region::LineL(k) => z.re == (4 * k) as f64,
        Region::LineM(k) => z.re == -((4 * k) as f64),
    }
}

/// Exact signed gap `sqrt(sq) - minus` between two pieces, or `Overlap` when
/// they share an unbounded stretch for which no finite gap is meaningful.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum Gap {
    Overlap,
    Surd { sq: i64, minus: i64 },
}

impl Gap {
    pub fn int(v: i64) -> Gap {
        if v >= 0 {
            Gap::Surd { sq: v * v, minus: 0 }
        } else {
            Gap::Surd { sq: 0, minus: -v }
        }
    }

    fn surd(sq: i64, minus: i64) -> Gap {
        Gap::Surd { sq, minus }
    }

    pub fn is_positive(self) -> bool {
        self > Gap::int(0)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Gap::Overlap => f64::NEG_INFINITY,
            Gap::Surd { sq, minus } => (sq as f64).sqrt() - minus as f64,
        }
    }

    /// Integer value when the surd is rational.
    pub fn as_int(self) -> Option<i64> {
        match self {
            Gap::Overlap => None,
            Gap::Surd { sq, minus } => {
                let root = sq.isqrt();
                (root * root == sq).then_some(root - minus)
            }
        }
    }
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, self.as_int()) {
            (Gap::Overlap, _) => f.write_str("overlap"),
            (_, Some(v)) => write!(f, "{v}"),
            (Gap::Surd { sq, minus }, None) => write!(f, "sqrt({sq})-{minus}"),
        }
    }
}

/// Sign of `sqrt(a) - sqrt(b) - t` for `a, b >= 0`.
fn cmp_root_diff(a: i128, b: i128, t: i128) -> Ordering {
    // s = sqrt(a) - sqrt(b) has the sign of a - b.
    match (a.cmp(&b), t.cmp(&0)) {
        (Ordering::Equal, _) => 0.cmp(&t),
        (Ordering::Greater, Ordering::Less | Ordering::Equal) => Ordering::Greater,
        (Ordering::Less, Ordering::Greater | Ordering::Equal) => Ordering::Less,
        (Ordering::Greater, Ordering::Greater) => {
            // s, t > 0: compare s^2 = a + b - 2 sqrt(ab) with t^2.
            let u = a + b - t * t;
            if u < 0 {
                Ordering::Less
            } else {
                // s^2 > t^2  <=>  u > 2 sqrt(ab)  <=>  u^2 > 4ab
                (u * u).cmp(&(4 * a * b))
            }
        }
        (Ordering::Less, Ordering::Less) => cmp_root_diff(b, a, -t).reverse(),
    }
}

impl Ord for Gap {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (Gap::Overlap, Gap::Overlap) => Ordering::Equal,
            (Gap::Overlap, _) => Ordering::Less,
            (_, Gap::Overlap) => Ordering::Greater,
            (Gap::Surd { sq: a, minus: m }, Gap::Surd { sq: b, minus: n }) => {
                // sqrt(a) - m  vs  sqrt(b) - n  <=>  sqrt(a) - sqrt(b) vs m - n
                cmp_root_diff(a as i128, b as i128, m as i128 - n as i128)
            }
        }
    }
}

impl PartialEq for Gap {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Gap {}

impl PartialOrd for Gap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Point-set primitives. Disk centres lie on the real axis; rays and lines
/// are vertical; half-planes are `Im z >= y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Primitive {
    Disk { center: i64, radius: i64 },
    /// `Re z = x` and `Im z >= from` (up) or `Im z <= -from` (down), `from >= 0`.
    Ray { x: i64, from: i64, up: bool },
    Line { x: i64 },
    UpperHalfPlane { y: i64 },
}

impl Primitive {
    /// Diameter of the interior, `None` when unbounded, `Some(0)` for
    /// primitives without interior.
    fn interior_diameter(self) -> Option<i64> {
        match self {
            Primitive::Disk { radius, .. } => Some(2 * radius),
            Primitive::Ray { .. } | Primitive::Line { .. } => Some(0),
            Primitive::UpperHalfPlane { .. } => None,
        }
    }

    fn gap(self, other: Primitive) -> Gap {
        use Primitive::*;
        match (self, other) {
            (Disk { center: c1, radius: r1 }, Disk { center: c2, radius: r2 }) => {
                Gap::surd((c1 - c2).pow(2), r1 + r2)
            }
            (Disk { center, radius }, Line { x }) | (Line { x }, Disk { center, radius }) => {
                Gap::surd((center - x).pow(2), radius)
            }
            (Disk { center, radius }, Ray { x, from, .. })
            | (Ray { x, from, .. }, Disk { center, radius }) => {
                Gap::surd((center - x).pow(2) + from * from, radius)
            }
            (Disk { radius, .. }, UpperHalfPlane { y }) | (UpperHalfPlane { y }, Disk { radius, .. }) => {
                if y >= 0 {
                    Gap::surd(y * y, radius)
                } else {
                    Gap::Overlap
                }
            }
            (Line { x: a }, Line { x: b }) => Gap::int((a - b).abs()),
            (Line { x: a }, Ray { x: b, .. }) | (Ray { x: b, .. }, Line { x: a }) => Gap::int((a - b).abs()),
            (Line { .. }, UpperHalfPlane { .. }) | (UpperHalfPlane { .. }, Line { .. }) => Gap::Overlap,
            (Ray { x: a, from: fa, up: ua }, Ray { x: b, from: fb, up: ub }) => {
                if ua == ub {
                    Gap::int((a - b).abs())
                } else {
                    Gap::surd((a - b).pow(2) + (fa + fb).pow(2), 0)
                }
            }
            (Ray { from, up, .. }, UpperHalfPlane { y }) | (UpperHalfPlane { y }, Ray { from, up, .. }) => {
                if up || y + from < 0 {
                    Gap::Overlap
                } else {
                    Gap::int(y + from)
                }
            }
            (UpperHalfPlane { .. }, UpperHalfPlane { .. }) => Gap::Overlap,
        }
    }

    fn hits_cell(self, x0: f64, x1: f64, y0: f64, y1: f64) -> bool {
        match self {
            Primitive::Disk { center, radius } => {
                let c = center as f64;
                let dx = c.clamp(x0, x1) - c;
                let dy = 0f64.clamp(y0, y1);
                dx * dx + dy * dy <= (radius * radius) as f64
            }
            Primitive::Ray { x, from, up } => {
                let x = x as f64;
                let from = from as f64;
                x0 <= x && x <= x1 && if up { y1 >= from } else { y0 <= -from }
            }
            Primitive::Line { x } => x0 <= x as f64 && x as f64 <= x1,
            Primitive::UpperHalfPlane { y } => y1 >= y as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub label: String,
    pub parts: Vec<Primitive>,
}

impl Piece {
    fn gap(&self, other: &Piece) -> Gap {
        self.parts
            .iter()
            .flat_map(|a| other.parts.iter().map(move |b| a.gap(*b)))
            .min()
            .unwrap_or(Gap::Overlap)
    }

    /// `None` for an unbounded interior component.
    fn interior_diameter(&self) -> Option<i64> {
        self.parts.iter().try_fold(0, |acc, p| p.interior_diameter().map(|d| acc.max(d)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GShape {
    /// Unit-style disk with its two vertical rays.
    DiskWithRays,
    /// Every `G_k` replaced by the half-plane `Im z >= 2` (broken fixture).
    UpperHalfPlane,
}

/// A parametrised version of `S`. [`CarlemanFamily::paper`] is the real one;
/// the other knobs exist for broken fixtures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CarlemanFamily {
    pub disk_radius: i64,
    pub ray_from: i64,
    pub g_shape: GShape,
    /// Additional disks `(centre, radius)` on the real axis.
    pub extra_disks: Vec<(i64, i64)>,
}

impl Default for CarlemanFamily {
    fn default() -> Self {
        Self::paper()
    }
}

impl CarlemanFamily {
    pub fn paper() -> Self {
        Self { disk_radius: 1, ray_from: 1, g_shape: GShape::DiskWithRays, extra_disks: Vec::new() }
    }

    fn disk_with_rays(&self, label: String, center: i64) -> Piece {
        Piece {
            label,
            parts: vec![
                Primitive::Disk { center, radius: self.disk_radius },
                Primitive::Ray { x: center, from: self.ray_from, up: true },
                Primitive::Ray { x: center, from: self.ray_from, up: false },
            ],
        }
    }

    /// All pieces with index `<= max_k`.
    pub fn pieces(&self, max_k: i64) -> Vec<Piece> {
        let mut out = vec![Piece {
            label: "G0".into(),
            parts: vec![Primitive::Disk { center: 2, radius: self.disk_radius }],
        }];
        if self.g_shape == GShape::UpperHalfPlane && max_k >= 1 {
            out.push(Piece { label: "H".into(), parts: vec![Primitive::UpperHalfPlane { y: 2 }] });
        }
        for k in 1..=max_k {
            if self.g_shape == GShape::DiskWithRays {
                out.push(self.disk_with_rays(format!("G{k}"), 4 * k + 2));
            }
            out.push(self.disk_with_rays(format!("B{k}"), -(4 * k + 2)));
            out.push(Piece { label: format!("L{k}"), parts: vec![Primitive::Line { x: 4 * k }] });
            out.push(Piece { label: format!("M{k}"), parts: vec![Primitive::Line { x: -4 * k }] });
        }
        for (i, &(center, radius)) in self.extra_disks.iter().enumerate() {
            out.push(Piece { label: format!("X{i}"), parts: vec![Primitive::Disk { center, radius }] });
        }
        out
    }
}

/// Smallest exact gap between two distinct pieces with index `<= max_k`.
pub fn min_separation(family: &CarlemanFamily, max_k: i64) -> Gap {
    let pieces = family.pieces(max_k.max(1));
    let mut best: Option<Gap> = None;
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i + 1..] {
            let g = a.gap(b);
            best = Some(best.map_or(g, |cur| cur.min(g)));
        }
    }
    best.unwrap_or(Gap::Overlap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub min_re: f64,
    pub max_re: f64,
    pub min_im: f64,
    pub max_im: f64,
}

impl Window {
    pub fn square(half_width: f64) -> Self {
        Self { min_re: -half_width, max_re: half_width, min_im: -half_width, max_im: half_width }
    }

    pub fn is_empty(&self) -> bool {
        !(self.max_re > self.min_re && self.max_im > self.min_im)
    }

    /// Largest index `k` whose pieces can reach into the window.
    fn max_piece_index(&self, radius: i64) -> i64 {
        let reach = self.max_re.abs().max(self.min_re.abs()) + radius as f64;
        (reach / 4.0).ceil() as i64 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityWitness {
    /// Components of the rasterised complement plus the node at infinity.
    pub components: usize,
    pub complement_cells: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingWitness {
    pub inner: f64,
    pub outer: f64,
    pub ring_cells: usize,
    pub unreached: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalConnectivityWitness {
    pub ring_width: f64,
    pub slack: f64,
    pub rings: Vec<RingWitness>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureCertificate {
    pub window: Window,
    pub grid_step: f64,
    pub rays_clipped: bool,
    pub condition_i: ConnectivityWitness,
    pub condition_ii: LocalConnectivityWitness,
    /// Largest diameter of an interior component; `None` means unbounded.
    pub condition_iii_bound: Option<i64>,
    pub min_gap: Gap,
    pub disjoint: bool,
    pub passed: bool,
}

impl StructureCertificate {
    pub fn condition_iii_passed(&self) -> bool {
        self.condition_iii_bound.is_some()
    }
}

struct Raster {
    nx: usize,
    ny: usize,
    window: Window,
    step: f64,
    blocked: Vec<bool>,
}

impl Raster {
    fn build(pieces: &[Piece], window: Window, step: f64, exec: Exec) -> Raster {
        let nx = ((window.max_re - window.min_re) / step).round().max(0.0) as usize;
        let ny = ((window.max_im - window.min_im) / step).round().max(0.0) as usize;
        let prims: Vec<Primitive> = pieces.iter().flat_map(|p| p.parts.iter().copied()).collect();
        let rows = exec.map_range(ny, |j| {
            let y0 = window.min_im + j as f64 * step;
            let y1 = y0 + step;
            (0..nx)
                .map(|i| {
                    let x0 = window.min_re + i as f64 * step;
                    let x1 = x0 + step;
                    prims.iter().any(|p| p.hits_cell(x0, x1, y0, y1))
                })
                .collect::<Vec<_>>()
        });
        Raster { nx, ny, window, step, blocked: rows.concat() }
    }

    fn norm(&self, idx: usize) -> f64 {
        let (i, j) = (idx % self.nx, idx / self.nx);
        let x = self.window.min_re + (i as f64 + 0.5) * self.step;
        let y = self.window.min_im + (j as f64 + 0.5) * self.step;
        x.abs().max(y.abs())
    }

    fn is_boundary(&self, idx: usize) -> bool {
        let (i, j) = (idx % self.nx, idx / self.nx);
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = (idx % self.nx, idx / self.nx);
        let (nx, ny) = (self.nx, self.ny);
        [(i > 0).then(|| idx - 1), (i + 1 < nx).then(|| idx + 1), (j > 0).then(|| idx - nx), (j + 1 < ny).then(|| idx + nx)]
            .into_iter()
            .flatten()
    }

    /// BFS over allowed complement cells from the node at infinity, which is
    /// adjacent to every allowed boundary cell.
    fn reach_from_infinity(&self, allowed: &dyn Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.blocked.len()];
        let mut queue: VecDeque<usize> = (0..self.blocked.len())
            .filter(|&c| self.is_boundary(c) && !self.blocked[c] && allowed(c))
            .collect();
        for &c in &queue {
            seen[c] = true;
        }
        while let Some(c) = queue.pop_front() {
            for n in self.neighbours(c) {
                if !seen[n] && !self.blocked[n] && allowed(n) {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        seen
    }

    fn condition_i(&self) -> ConnectivityWitness {
        let reached = self.reach_from_infinity(&|_| true);
        let complement_cells = self.blocked.iter().filter(|b| !**b).count();
        // Remaining components not attached to infinity.
        let mut seen = reached;
        let mut components = usize::from(complement_cells > 0 || self.blocked.is_empty());
        for start in 0..self.blocked.len() {
            if self.blocked[start] || seen[start] {
                continue;
            }
            components += 1;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(c) = queue.pop_front() {
                for n in self.neighbours(c) {
                    if !seen[n] && !self.blocked[n] {
                        seen[n] = true;
                        queue.push_back(n);
                    }
                }
            }
        }
        ConnectivityWitness { components, complement_cells, passed: components == 1 }
    }

    fn condition_ii(&self, ring_width: f64) -> LocalConnectivityWitness {
        let slack = ring_width / 2.0;
        let half = self.window.max_re.min(-self.window.min_re).min(self.window.max_im).min(-self.window.min_im);
        let mut rings = Vec::new();
        let mut inner = ring_width;
        while inner + ring_width <= half {
            let outer = inner + ring_width;
            let reached = self.reach_from_infinity(&|c| self.norm(c) >= inner - slack);
            let ring: Vec<usize> = (0..self.blocked.len())
                .filter(|&c| !self.blocked[c] && (inner..outer).contains(&self.norm(c)))
                .collect();
            let unreached = ring.iter().filter(|&&c| !reached[c]).count();
            rings.push(RingWitness { inner, outer, ring_cells: ring.len(), unreached });
            inner = outer;
        }
        let passed = rings.iter().all(|r| r.unreached == 0);
        LocalConnectivityWitness { ring_width, slack, rings, passed }
    }
}

/// Default annulus width for the local-connectivity witness.
pub const RING_WIDTH: f64 = 5.0;

/// Discrete witness for the three structural conditions on `S` within a
/// window, plus exact disjointness of the pieces meeting the window.
pub fn verify_structure(family: &CarlemanFamily, window: Window, grid_step: f64, exec: Exec) -> StructureCertificate {
    assert!(grid_step > 0.0, "grid step must be positive");
    let max_k = window.max_piece_index(family.disk_radius);
    let pieces = family.pieces(max_k);
    let min_gap = min_separation(family, max_k);
    let condition_iii_bound = pieces.iter().try_fold(0, |acc, p| p.interior_diameter().map(|d| acc.max(d)));

    let raster = Raster::build(&pieces, window, grid_step, exec);
    let condition_i = raster.condition_i();
    let condition_ii = raster.condition_ii(RING_WIDTH);
    let rays_clipped = pieces.iter().any(|p| p.parts.iter().any(|q| matches!(q, Primitive::Ray { .. })));
    let disjoint = min_gap.is_positive();
    let passed = condition_i.passed && condition_ii.passed && condition_iii_bound.is_some() && disjoint;
    StructureCertificate {
        window,
        grid_step,
        rays_clipped,
        condition_i,
        condition_ii,
        condition_iii_bound,
        min_gap,
        disjoint,
        passed,
    }
}
