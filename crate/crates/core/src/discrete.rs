//! Finite-difference layer shared by the solvers, the energy monitors and
//! the reformulation check: nodal derivative jets on the radial grid
//! (times polar cell centres for axisymmetric fields) and the spherical
//! operators written pointwise in terms of those jets.
//!
//! A spherically symmetric field is the special case with no angular
//! dependence, evaluated on the equator (cot θ = 0, sin θ = 1), so the
//! same formulas serve both layouts.

use crate::error::{Error, Result};
use crate::grid::{AngularGrid, RadialGrid};
use crate::model::{AxiState, SymState};
use crate::stationary::SteadyProfile;
use std::f64::consts::PI;

/// Radial and polar components (no swirl).
pub type V2 = [f64; 2];

/// Behaviour under θ → −θ, used for ghost cells across the axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// scalars and radial components
    Even,
    /// polar components
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Value and derivatives of a field at one node.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub r: f64,
    pub t: f64,
    pub rr: f64,
    pub tt: f64,
    pub rt: f64,
}

/// Position data entering the operator formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geo {
    pub r: f64,
    pub sin: f64,
    pub cot: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    Sym(RadialGrid),
    Axi(RadialGrid, AngularGrid),
}

impl Layout {
    pub fn radial(&self) -> &RadialGrid {
        match self {
            Layout::Sym(g) | Layout::Axi(g, _) => g,
        }
    }

    pub fn n_r(&self) -> usize {
        self.radial().len()
    }

    pub fn n_theta(&self) -> usize {
        match self {
            Layout::Sym(_) => 1,
            Layout::Axi(_, a) => a.n_cells(),
        }
    }

    pub fn len(&self) -> usize {
        self.n_r() * self.n_theta()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n_theta() + j
    }

    pub fn theta(&self, j: usize) -> f64 {
        match self {
            Layout::Sym(_) => PI / 2.0,
            Layout::Axi(_, a) => a.center(j),
        }
    }

    pub fn geo(&self, k: usize) -> Geo {
        let nt = self.n_theta();
        let (i, j) = (k / nt, k % nt);
        let r = self.radial().r(i);
        match self {
            Layout::Sym(_) => Geo { r, sin: 1.0, cot: 0.0 },
            Layout::Axi(_, a) => {
                let (sin, cot) = a.center_trig(j);
                Geo { r, sin, cot }
            }
        }
    }

    /// Nodes with a full radial stencil (1 <= i <= M - 1).
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        let nt = self.n_theta();
        nt..(self.n_r() - 1) * nt
    }

    /// Volume of the cell around node k (4π r²dr or 2π r² sinθ dr dθ).
    pub fn volume(&self, k: usize) -> f64 {
        let nt = self.n_theta();
        let (i, j) = (k / nt, k % nt);
        let g = self.radial();
        match self {
            Layout::Sym(_) => 4.0 * PI * g.r2_weight(i),
            Layout::Axi(_, a) => 2.0 * PI * g.r2_weight(i) * a.sin_weight(j),
        }
    }

    /// Area weight of node k on the unit sphere (zero off the boundary row).
    pub fn boundary_area(&self, k: usize) -> f64 {
        let nt = self.n_theta();
        if k >= nt {
            return 0.0;
        }
        match self {
            Layout::Sym(_) => 4.0 * PI,
            Layout::Axi(_, a) => 2.0 * PI * a.sin_weight(k),
        }
    }

    pub fn check_len(&self, what: &str, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(Error::GridMismatch(format!("{what} has {n} values, layout has {}", self.len())));
        }
        Ok(())
    }

    /// Derivative jets of a nodal field.
    pub fn jets(&self, f: &[f64], parity: Parity) -> Vec<Jet2> {
        let g = self.radial();
        let (nr, nt) = (self.n_r(), self.n_theta());
        let mut out = vec![Jet2::default(); nr * nt];
        // radial first and second derivative weights per row
        let rw: Vec<(usize, [f64; 3], [f64; 3])> = (0..nr)
            .map(|i| {
                let (s, w1) = g.d1_weights(i);
                let w2 = if i == 0 || i + 1 == nr { one_sided_d2(g, s) } else { g.d2_weights(i) };
                (s, w1, w2)
            })
            .collect();
        let dth = match self {
            Layout::Sym(_) => 1.0,
            Layout::Axi(_, a) => a.dtheta(),
        };
        let sgn = parity.sign();
        // polar neighbours with parity ghosts
        let nb = |row: &[f64], j: usize| -> (f64, f64) {
            let lo = if j == 0 { sgn * row[0] } else { row[j - 1] };
            let hi = if j + 1 == nt { sgn * row[nt - 1] } else { row[j + 1] };
            (lo, hi)
        };
        let t1 = |row: &[f64], j: usize| {
            if nt == 1 {
                return 0.0;
            }
            let (lo, hi) = nb(row, j);
            (hi - lo) / (2.0 * dth)
        };
        for i in 0..nr {
            let (s, w1, w2) = rw[i];
            let rows = [&f[s * nt..(s + 1) * nt], &f[(s + 1) * nt..(s + 2) * nt], &f[(s + 2) * nt..(s + 3) * nt]];
            let row = &f[i * nt..(i + 1) * nt];
            for j in 0..nt {
                let jet = &mut out[i * nt + j];
                jet.v = row[j];
                jet.r = w1[0] * rows[0][j] + w1[1] * rows[1][j] + w1[2] * rows[2][j];
                jet.rr = w2[0] * rows[0][j] + w2[1] * rows[1][j] + w2[2] * rows[2][j];
                if nt > 1 {
                    let (lo, hi) = nb(row, j);
                    jet.t = (hi - lo) / (2.0 * dth);
                    jet.tt = (hi - 2.0 * row[j] + lo) / (dth * dth);
                    jet.rt = w1[0] * t1(rows[0], j) + w1[1] * t1(rows[1], j) + w1[2] * t1(rows[2], j);
                }
            }
        }
        out
    }

    /// (1/r²) ∂_r(r² ρ u_r) on the boundary row, one-sided second order.
    fn boundary_radial_div(&self, rho: &[f64], ur: &[f64], j: usize) -> f64 {
        let g = self.radial();
        let nt = self.n_theta();
        let (s0, w) = g.d1_weights(0);
        let d: f64 = (0..3)
            .map(|q| {
                let (i, r) = (s0 + q, g.r(s0 + q));
                w[q] * r * r * rho[i * nt + j] * ur[i * nt + j]
            })
            .sum();
        d / (g.r(0) * g.r(0))
    }

    /// Radial mass flux through r = 1 per polar column (times the area
    /// weight 4π or 2π·sin-weight), in the discrete form that telescopes
    /// with [`Layout::mass_rhs`]: ½(F_0 + F_1) − V_0 ∂_r F(1), F = r²ρu_r.
    /// It equals the flux r²ρu_r at r = 1 up to O(h²).
    pub fn boundary_mass_flux(&self, rho: &[f64], ur: &[f64]) -> f64 {
        let g = self.radial();
        let nt = self.n_theta();
        (0..nt)
            .map(|j| {
                let f = |i: usize| g.r(i).powi(2) * rho[i * nt + j] * ur[i * nt + j];
                let w = match self {
                    Layout::Sym(_) => 4.0 * PI,
                    Layout::Axi(_, a) => 2.0 * PI * a.sin_weight(j),
                };
                w * (0.5 * (f(0) + f(1)) - g.r2_weight(0) * self.boundary_radial_div(rho, ur, j))
            })
            .sum()
    }

    /// −div(ρu): nodal and one-sided on the outflow boundary r = 1 (no
    /// boundary condition for ρ there), finite-volume with central fluxes
    /// on the other rows, and polar fluxes vanishing on the axis. The last
    /// radial row is left at zero (it is held by the far-field condition).
    pub fn mass_rhs(&self, rho: &[f64], ur: &[f64], ut: &[f64]) -> Vec<f64> {
        let g = self.radial();
        let (nr, nt) = (self.n_r(), self.n_theta());
        let mut out = vec![0.0; nr * nt];
        let rf = |i: usize, j: usize| {
            let r = g.r(i);
            r * r * rho[i * nt + j] * ur[i * nt + j]
        };
        for j in 0..nt {
            out[j] = -self.boundary_radial_div(rho, ur, j);
            let mut lower = 0.5 * (rf(0, j) + rf(1, j));
            for i in 1..nr - 1 {
                let upper = 0.5 * (rf(i, j) + rf(i + 1, j));
                out[i * nt + j] = -(upper - lower) / g.r2_weight(i);
                lower = upper;
            }
        }
        if let Layout::Axi(_, a) = self {
            for i in 0..nr - 1 {
                let (lo, hi) = g.dual_bounds(i);
                let rmom = 0.5 * (hi * hi - lo * lo);
                let v = g.r2_weight(i);
                let row = i * nt;
                let m = |k: usize| rho[k] * ut[k];
                let mut lower = 0.0;
                for j in 0..nt {
                    let upper = if j + 1 == nt { 0.0 } else { a.edge_sin(j + 1) * 0.5 * (m(row + j) + m(row + j + 1)) };
                    out[row + j] -= rmom * (upper - lower) / (v * a.sin_weight(j));
                    lower = upper;
                }
            }
        }
        out
    }
}

/// Density and velocity components over a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Fields {
    pub rho: Vec<f64>,
    pub ur: Vec<f64>,
    pub ut: Vec<f64>,
}

impl Fields {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn from_sym(s: &SymState) -> Self {
        Self { rho: s.rho.clone(), ur: s.u_rad.clone(), ut: vec![0.0; s.rho.len()] }
    }

    pub fn to_sym(&self, t: f64) -> SymState {
        SymState { t, rho: self.rho.clone(), u_rad: self.ur.clone() }
    }

    pub fn from_axi(s: &AxiState) -> Self {
        Self { rho: s.rho.clone(), ur: s.u_r.clone(), ut: s.u_theta.clone() }
    }

    pub fn to_axi(&self, t: f64, layout: &Layout) -> AxiState {
        AxiState {
            t,
            n_r: layout.n_r(),
            n_theta: layout.n_theta(),
            rho: self.rho.clone(),
            u_r: self.ur.clone(),
            u_theta: self.ut.clone(),
        }
    }

    /// The steady profile on the layout; its grid must be the layout's
    /// radial grid.
    pub fn from_profile(layout: &Layout, profile: &SteadyProfile) -> Result<Self> {
        if profile.grid.nodes() != layout.radial().nodes() {
            return Err(Error::GridMismatch(format!(
                "profile has {} radial nodes, layout {} (resample the profile first)",
                profile.grid.len(),
                layout.n_r()
            )));
        }
        let nt = layout.n_theta();
        let n = layout.len();
        Ok(Self {
            rho: (0..n).map(|k| profile.rho_t[k / nt]).collect(),
            ur: (0..n).map(|k| profile.u_t[k / nt]).collect(),
            ut: vec![0.0; n],
        })
    }

    pub fn check(&self, layout: &Layout) -> Result<()> {
        layout.check_len("density", self.rho.len())?;
        layout.check_len("radial velocity", self.ur.len())?;
        layout.check_len("polar velocity", self.ut.len())
    }

    /// self - other, component-wise.
    pub fn minus(&self, other: &Fields) -> Fields {
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect();
        Fields { rho: d(&self.rho, &other.rho), ur: d(&self.ur, &other.ur), ut: d(&self.ut, &other.ut) }
    }
}

/// Second derivative from three consecutive nodes starting at s.
fn one_sided_d2(g: &RadialGrid, s: usize) -> [f64; 3] {
    let (a, b, c) = (g.r(s), g.r(s + 1), g.r(s + 2));
    let (hm, hp) = (b - a, c - b);
    [2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))]
}

#[inline]
pub fn grad(f: &Jet2, g: Geo) -> V2 {
    [f.r, f.t / g.r]
}

#[inline]
pub fn div(vr: &Jet2, vt: &Jet2, g: Geo) -> f64 {
    vr.r + 2.0 * vr.v / g.r + (vt.t + g.cot * vt.v) / g.r
}

/// (a·∇) f for a scalar f.
#[inline]
pub fn adv_scalar(a: V2, f: &Jet2, g: Geo) -> f64 {
    a[0] * f.r + a[1] * f.t / g.r
}

/// (a·∇) b for a vector b with components (br, bt).
#[inline]
pub fn adv(a: V2, br: &Jet2, bt: &Jet2, g: Geo) -> V2 {
    [
        a[0] * br.r + a[1] * (br.t - bt.v) / g.r,
        a[0] * bt.r + a[1] * (bt.t + br.v) / g.r,
    ]
}

#[inline]
pub fn lap_scalar(f: &Jet2, g: Geo) -> f64 {
    f.rr + 2.0 * f.r / g.r + (f.tt + g.cot * f.t) / (g.r * g.r)
}

/// Vector Laplacian with the curvature couplings.
#[inline]
pub fn lap_vec(vr: &Jet2, vt: &Jet2, g: Geo) -> V2 {
    let r2 = g.r * g.r;
    [
        lap_scalar(vr, g) - 2.0 * vr.v / r2 - 2.0 * (vt.t + g.cot * vt.v) / r2,
        lap_scalar(vt, g) - vt.v / (r2 * g.sin * g.sin) + 2.0 * vr.t / r2,
    ]
}

/// ∇ div v, expanded.
#[inline]
pub fn grad_div(vr: &Jet2, vt: &Jet2, g: Geo) -> V2 {
    let (r, r2) = (g.r, g.r * g.r);
    let csc2 = 1.0 / (g.sin * g.sin);
    [
        vr.rr + 2.0 * vr.r / r - 2.0 * vr.v / r2 + (vt.rt + g.cot * vt.r) / r - (vt.t + g.cot * vt.v) / r2,
        (vr.rt + 2.0 * vr.t / r + (vt.tt + g.cot * vt.t - csc2 * vt.v) / r) / r,
    ]
}

/// |∇v|² for an axisymmetric vector field without swirl.
#[inline]
pub fn grad_sq_vec(vr: &Jet2, vt: &Jet2, g: Geo) -> f64 {
    let r = g.r;
    let a = (vr.t - vt.v) / r;
    let b = (vt.t + vr.v) / r;
    let c = (vr.v + g.cot * vt.v) / r;
    vr.r * vr.r + vt.r * vt.r + a * a + b * b + c * c
}
