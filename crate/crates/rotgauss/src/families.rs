//! Catalog of rotational surfaces and their profile curves.
//!
//! Two chart groups cover everything:
//!
//! * the double-rotational chart in `E^4_1`,
//!   `r(s,t) = (x cos at, x sin at, w sinh bt, w cosh bt)` with an arc-length
//!   timelike profile `(x, w)`, frame signs `(−1, +1, +1, +1)`;
//! * the twin charts `M_1(b)`, `M_2(b)` in `E^4_2`,
//!   `r_1 = (w sinh t, y cosh bt, y sinh bt, w cosh t)` and
//!   `r_2 = (x cos t, x sin t, z cos bt, z sin bt)`, frame signs
//!   `(ε*, ε, −ε, −ε*)` with `ε, ε*` the regularity signs of the profile.
//!
//! `M_2` mirrors `M_1` under `(y, w) → (z, x)`; both run through one code
//! path distinguished by a single sign, so the twin derivations cannot
//! drift apart. The de Sitter, plane and cone surfaces are specialisations
//! of the double-rotational chart with synthesised profiles.

use std::borrow::Cow;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::jets::{ImmersionJet, ProfileJet};
use crate::pseudo::{Ambient, PseudoVector};
use crate::{Error, Result, TAU_REG};

// ---------------------------------------------------------------------------
// Profile curves
// ---------------------------------------------------------------------------

/// One integration node of the zero-mean-curvature profile ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeState {
    pub s: f64,
    pub x: f64,
    pub w: f64,
    pub phi: f64,
}

/// RK4-integrated zero-mean-curvature profile for the double-rotational
/// chart, parametrised by the hyperbolic angle `φ` with `x′ = sinh φ`,
/// `w′ = cosh φ`, so the arc-length identity `x′² − w′² = −1` holds exactly.
///
/// The defining ODE is the zero-mean condition `h³₂₂ = κ = φ′`:
/// `φ′ = −(a²x cosh φ + b²w sinh φ) / (a²x² + b²w²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroMeanProfile {
    pub a: f64,
    pub b: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub step: f64,
    /// States on the uniform grid `s_min + k·step`.
    states: Vec<OdeState>,
}

fn zero_mean_rhs(a: f64, b: f64, x: f64, w: f64, phi: f64) -> Result<f64> {
    let den = a * a * x * x + b * b * w * w;
    if den <= TAU_REG {
        return Err(Error::IntegrationHalt {
            s: f64::NAN,
            reason: format!("denominator a^2 x^2 + b^2 w^2 = {den:e} underflowed"),
            partial: Vec::new(),
        });
    }
    Ok(-(a * a * x * phi.cosh() + b * b * w * phi.sinh()) / den)
}

fn rk4_step(a: f64, b: f64, st: &OdeState, h: f64) -> Result<OdeState> {
    let f = |x: f64, w: f64, phi: f64| -> Result<[f64; 3]> {
        Ok([phi.sinh(), phi.cosh(), zero_mean_rhs(a, b, x, w, phi)?])
    };
    let k1 = f(st.x, st.w, st.phi)?;
    let k2 = f(
        st.x + 0.5 * h * k1[0],
        st.w + 0.5 * h * k1[1],
        st.phi + 0.5 * h * k1[2],
    )?;
    let k3 = f(
        st.x + 0.5 * h * k2[0],
        st.w + 0.5 * h * k2[1],
        st.phi + 0.5 * h * k2[2],
    )?;
    let k4 = f(st.x + h * k3[0], st.w + h * k3[1], st.phi + h * k3[2])?;
    Ok(OdeState {
        s: st.s + h,
        x: st.x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        w: st.w + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        phi: st.phi + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    })
}

impl ZeroMeanProfile {
    /// Integrates the zero-mean ODE from the initial state at `s = 0` over
    /// `s_range`, with fixed RK4 step `step`.
    pub fn integrate(
        a: f64,
        b: f64,
        x_init: f64,
        w_init: f64,
        phi_init: f64,
        s_range: (f64, f64),
        step: f64,
    ) -> Result<Self> {
        if a <= 0.0 || b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rotation rates must be positive, got a = {a}, b = {b}"
            )));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidParameter(format!("step must be > 0, got {step}")));
        }
        let (s_min, s_max) = s_range;
        if !(s_min <= 0.0 && 0.0 <= s_max && s_min < s_max) {
            return Err(Error::InvalidParameter(format!(
                "s-range [{s_min}, {s_max}] must straddle the initial point s = 0"
            )));
        }
        let den0 = a * a * x_init * x_init + b * b * w_init * w_init;
        if den0 <= TAU_REG {
            return Err(Error::InvalidParameter(
                "initial point has a^2 x^2 + b^2 w^2 below the regularity tolerance".into(),
            ));
        }
        let init = OdeState {
            s: 0.0,
            x: x_init,
            w: w_init,
            phi: phi_init,
        };
        let halt = |st: &OdeState, covered: &[OdeState], e: Error| match e {
            Error::IntegrationHalt { reason, .. } => Error::IntegrationHalt {
                s: st.s,
                reason,
                partial: covered.iter().map(|o| (o.s, o.x, o.w, o.phi)).collect(),
            },
            other => other,
        };
        let n_fwd = (s_max / step).round() as usize;
        let n_bwd = ((-s_min) / step).round() as usize;
        let mut forward = Vec::with_capacity(n_fwd + 1);
        forward.push(init);
        for _ in 0..n_fwd {
            let last = *forward.last().unwrap();
            let next = rk4_step(a, b, &last, step).map_err(|e| halt(&last, &forward, e))?;
            forward.push(next);
        }
        let mut backward = Vec::with_capacity(n_bwd);
        let mut cursor = init;
        for _ in 0..n_bwd {
            cursor = rk4_step(a, b, &cursor, -step).map_err(|e| {
                let mut covered: Vec<OdeState> = backward.iter().rev().copied().collect();
                covered.extend(forward.iter().copied());
                halt(&cursor, &covered, e)
            })?;
            backward.push(cursor);
        }
        backward.reverse();
        backward.extend(forward);
        let states = backward;
        Ok(ZeroMeanProfile {
            a,
            b,
            s_min: states.first().unwrap().s,
            s_max: states.last().unwrap().s,
            step,
            states,
        })
    }

    pub fn states(&self) -> &[OdeState] {
        &self.states
    }

    /// Dense output: nearest stored node plus one partial RK4 step.
    pub fn state_at(&self, s: f64) -> Result<OdeState> {
        if s < self.s_min - 1e-12 || s > self.s_max + 1e-12 {
            return Err(Error::Domain(format!(
                "s = {s} outside integrated range [{}, {}]",
                self.s_min, self.s_max
            )));
        }
        let idx = (((s - self.s_min) / self.step).round() as isize)
            .clamp(0, self.states.len() as isize - 1) as usize;
        let node = self.states[idx];
        let ds = s - node.s;
        if ds.abs() < 1e-15 {
            return Ok(node);
        }
        rk4_step(self.a, self.b, &node, ds)
    }

    pub fn jet(&self, s: f64) -> Result<ProfileJet> {
        let st = self.state_at(s)?;
        let (sh, ch) = (st.phi.sinh(), st.phi.cosh());
        let dphi = zero_mean_rhs(self.a, self.b, st.x, st.w, st.phi)?;
        // Differentiate the right-hand side once more along the flow.
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let den = a2 * st.x * st.x + b2 * st.w * st.w;
        let num = a2 * st.x * ch + b2 * st.w * sh;
        let dnum = a2 * (sh * ch + st.x * sh * dphi) + b2 * (ch * sh + st.w * ch * dphi);
        let dden = 2.0 * (a2 * st.x * sh + b2 * st.w * ch);
        let ddphi = -(dnum * den - num * dden) / (den * den);
        Ok(ProfileJet {
            s,
            c1: [st.x, sh, dphi * ch, ddphi * ch + dphi * dphi * sh],
            c2: [st.w, ch, dphi * sh, ddphi * sh + dphi * dphi * ch],
        })
    }
}

/// Integrates the zero-mean-curvature profile ODE and wraps the trajectory
/// as a profile curve; see [`ZeroMeanProfile::integrate`].
pub fn zero_mean_profile_ode(
    a: f64,
    b: f64,
    x_init: f64,
    w_init: f64,
    phi_init: f64,
    s_range: (f64, f64),
    step: f64,
) -> Result<ProfileCurve> {
    ZeroMeanProfile::integrate(a, b, x_init, w_init, phi_init, s_range, step)
        .map(ProfileCurve::OdeGenerated)
}

/// Profile curve of a rotational surface, producing order-3 jets of its two
/// components `(c1, c2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileCurve {
    /// `c1 = x0 s + x1`, `c2 = w0 s + w1`.
    Line { x0: f64, x1: f64, w0: f64, w1: f64 },
    /// `c1 = r0 cosh(s/r0)`, `c2 = r0 sinh(s/r0)` (arc-length timelike).
    HyperbolicArc { r0: f64 },
    /// `c1 = b0 s^k`, `c2 = s` on `s > 0`.
    Power { b0: f64, exponent: f64 },
    /// `(c2 + c1)² + λ0 (c2 − c1)² = μ0`, parametrised by the branch angle.
    Conic { lambda0: f64, mu0: f64 },
    /// Vranceanu profile `c1 = e^{ρ s} sinh s`, `c2 = e^{ρ s} cosh s`.
    Vranceanu { rate: f64 },
    /// Zero-mean-curvature profile from the RK4 generator.
    OdeGenerated(ZeroMeanProfile),
}

/// Analytic point on the conic `u² + λ0 v² = μ0` with `c2 = (u+v)/2`,
/// `c1 = (u−v)/2`; trigonometric branch for `λ0 > 0`, hyperbolic for
/// `λ0 < 0`.
pub fn conic_profile_parametrize(lambda0: f64, mu0: f64, theta: f64) -> Result<ProfileJet> {
    if lambda0 == 0.0 {
        return Err(Error::InvalidParameter("conic profile requires lambda0 != 0".into()));
    }
    // Order-3 jets of u(θ) and v(θ) on the chosen branch.
    let (u, v): ([f64; 4], [f64; 4]) = if lambda0 > 0.0 {
        if mu0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "conic branch u^2 + {lambda0} v^2 = {mu0} is empty"
            )));
        }
        let (ru, rv) = (mu0.sqrt(), (mu0 / lambda0).sqrt());
        let (c, s) = (theta.cos(), theta.sin());
        (
            [ru * c, -ru * s, -ru * c, ru * s],
            [rv * s, rv * c, -rv * s, -rv * c],
        )
    } else if mu0 > 0.0 {
        let (ru, rv) = (mu0.sqrt(), (mu0 / -lambda0).sqrt());
        let (c, s) = (theta.cosh(), theta.sinh());
        ([ru * c, ru * s, ru * c, ru * s], [rv * s, rv * c, rv * s, rv * c])
    } else if mu0 < 0.0 {
        let (ru, rv) = ((-mu0).sqrt(), (mu0 / lambda0).sqrt());
        let (c, s) = (theta.cosh(), theta.sinh());
        ([ru * s, ru * c, ru * s, ru * c], [rv * c, rv * s, rv * c, rv * s])
    } else {
        return Err(Error::InvalidParameter(
            "conic branch with mu0 = 0 degenerates to a line pair".into(),
        ));
    };
    let mut c1 = [0.0; 4];
    let mut c2 = [0.0; 4];
    for k in 0..4 {
        c2[k] = 0.5 * (u[k] + v[k]);
        c1[k] = 0.5 * (u[k] - v[k]);
    }
    Ok(ProfileJet { s: theta, c1, c2 })
}

impl ProfileCurve {
    /// Natural open parameter domain.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            ProfileCurve::Power { .. } => (0.0, f64::INFINITY),
            ProfileCurve::OdeGenerated(p) => (p.s_min, p.s_max),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Exact analytic jet at `s`; errors outside the declared domain.
    pub fn jet(&self, s: f64) -> Result<ProfileJet> {
        let (lo, hi) = self.domain();
        if !(s >= lo && s <= hi) || (matches!(self, ProfileCurve::Power { .. }) && s <= 0.0) {
            return Err(Error::Domain(format!(
                "profile parameter s = {s} outside domain ({lo}, {hi})"
            )));
        }
        match *self {
            ProfileCurve::Line { x0, x1, w0, w1 } => Ok(ProfileJet {
                s,
                c1: [x0 * s + x1, x0, 0.0, 0.0],
                c2: [w0 * s + w1, w0, 0.0, 0.0],
            }),
            ProfileCurve::HyperbolicArc { r0 } => {
                let (sh, ch) = ((s / r0).sinh(), (s / r0).cosh());
                Ok(ProfileJet {
                    s,
                    c1: [r0 * ch, sh, ch / r0, sh / (r0 * r0)],
                    c2: [r0 * sh, ch, sh / r0, ch / (r0 * r0)],
                })
            }
            ProfileCurve::Power { b0, exponent: k } => {
                Ok(ProfileJet {
                    s,
                    c1: [
                        b0 * s.powf(k),
                        b0 * k * s.powf(k - 1.0),
                        b0 * k * (k - 1.0) * s.powf(k - 2.0),
                        b0 * k * (k - 1.0) * (k - 2.0) * s.powf(k - 3.0),
                    ],
                    c2: [s, 1.0, 0.0, 0.0],
                })
            }
            ProfileCurve::Conic { lambda0, mu0 } => conic_profile_parametrize(lambda0, mu0, s),
            ProfileCurve::Vranceanu { rate: r } => {
                let f = (r * s).exp();
                let (sh, ch) = (s.sinh(), s.cosh());
                Ok(ProfileJet {
                    s,
                    c1: [
                        f * sh,
                        f * (r * sh + ch),
                        f * (r * r * sh + 2.0 * r * ch + sh),
                        f * (r * r * r * sh + 3.0 * r * r * ch + 3.0 * r * sh + ch),
                    ],
                    c2: [
                        f * ch,
                        f * (r * ch + sh),
                        f * (r * r * ch + 2.0 * r * sh + ch),
                        f * (r * r * r * ch + 3.0 * r * r * sh + 3.0 * r * ch + sh),
                    ],
                })
            }
            ProfileCurve::OdeGenerated(ref p) => p.jet(s),
        }
    }
}

// ---------------------------------------------------------------------------
// Surface families
// ---------------------------------------------------------------------------

/// Which coordinate 2-plane the trivial `Plane` family sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaneKind {
    /// The timelike `x3 x4`-plane of `E^4_1` (profile `x ≡ 0`).
    Zw,
    /// The timelike `x1 x4`-plane of `E^4_2` (profile `y ≡ 0` in `M_1`).
    X1X4,
}

/// A cataloged rotational surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SurfaceFamily {
    /// Double rotational surface in `E^4_1` with an arc-length timelike profile.
    DoubleRotational { a: f64, b: f64, profile: ProfileCurve },
    /// Rotational surface `M_1(b)` in `E^4_2`, profile `(y, w)`.
    M1 { b: f64, profile: ProfileCurve },
    /// Rotational surface `M_2(b)` in `E^4_2`, profile `(z, x)`.
    M2 { b: f64, profile: ProfileCurve },
    /// Parallel-mean-curvature surface on the de Sitter quadric
    /// `S^3_1(1/r0²)`: the double-rotational chart with the hyperbolic-arc
    /// profile of radius `r0`.
    DeSitterMinimal { r0: f64, a: f64, b: f64 },
    /// A coordinate 2-plane, swept in rotational coordinates.
    Plane { kind: PlaneKind, a: f64, b: f64 },
    /// Timelike regular cone `x = c0 w` in the double-rotational chart.
    Cone { c0: f64, w0: f64, a: f64, b: f64 },
}

pub(crate) const MIRROR_M1: f64 = 1.0;
pub(crate) const MIRROR_M2: f64 = -1.0;

/// Chart a family resolves to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ChartKind {
    /// Double-rotational chart in `E^4_1`.
    G21 { a: f64, b: f64 },
    /// Twin chart in `E^4_2`; `mirror` is `+1` for `M_1`, `−1` for `M_2`.
    G22 { b: f64, mirror: f64 },
}

impl ChartKind {
    pub fn ambient(&self) -> Ambient {
        match self {
            ChartKind::G21 { .. } => Ambient::E4_1,
            ChartKind::G22 { .. } => Ambient::E4_2,
        }
    }
}

pub(crate) struct ResolvedChart<'a> {
    pub kind: ChartKind,
    pub profile: Cow<'a, ProfileCurve>,
}

impl SurfaceFamily {
    /// Validates parameter ranges and profile/chart compatibility.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
            }
        };
        match self {
            SurfaceFamily::DoubleRotational { a, b, profile } => {
                positive("a", *a)?;
                positive("b", *b)?;
                match profile {
                    ProfileCurve::Line { x0, w0, .. } => {
                        if (x0 * x0 - w0 * w0 + 1.0).abs() > 1e-9 {
                            return Err(Error::InvalidParameter(
                                "double-rotational line profile must satisfy x0^2 - w0^2 = -1"
                                    .into(),
                            ));
                        }
                    }
                    ProfileCurve::HyperbolicArc { r0 } => positive("r0", *r0)?,
                    ProfileCurve::OdeGenerated(p) => {
                        if (p.a - a).abs() > 1e-12 || (p.b - b).abs() > 1e-12 {
                            return Err(Error::InvalidParameter(
                                "zero-mean profile was generated for different (a, b)".into(),
                            ));
                        }
                    }
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "profile {other:?} is not an arc-length timelike profile"
                        )))
                    }
                }
            }
            SurfaceFamily::M1 { b, profile } | SurfaceFamily::M2 { b, profile } => {
                positive("b", *b)?;
                match profile {
                    ProfileCurve::Power { b0, .. } => {
                        if *b0 == 0.0 {
                            return Err(Error::InvalidParameter("power profile requires b0 != 0".into()));
                        }
                    }
                    ProfileCurve::Conic { lambda0, mu0 } => {
                        if *lambda0 == 0.0 {
                            return Err(Error::InvalidParameter("conic profile requires lambda0 != 0".into()));
                        }
                        // Reject empty branches eagerly.
                        conic_profile_parametrize(*lambda0, *mu0, 0.5).map(|_| ())?;
                    }
                    ProfileCurve::Vranceanu { rate } => {
                        if rate.abs() >= 1.0 {
                            return Err(Error::InvalidParameter(
                                "vranceanu profile requires |rate| < 1 for regularity".into(),
                            ));
                        }
                    }
                    ProfileCurve::Line { .. } => {}
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "profile {other:?} is not supported on M1/M2"
                        )))
                    }
                }
            }
            SurfaceFamily::DeSitterMinimal { r0, a, b } => {
                positive("r0", *r0)?;
                positive("a", *a)?;
                positive("b", *b)?;
            }
            SurfaceFamily::Plane { a, b, .. } => {
                positive("a", *a)?;
                positive("b", *b)?;
            }
            SurfaceFamily::Cone { c0, w0, a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
                if c0.abs() >= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "cone slope must satisfy c0^2 < 1, got c0 = {c0}"
                    )));
                }
                if *w0 == 0.0 {
                    return Err(Error::InvalidParameter("cone requires w0 != 0".into()));
                }
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> Ambient {
        self.chart().kind.ambient()
    }

    pub(crate) fn chart(&self) -> ResolvedChart<'_> {
        match self {
            SurfaceFamily::DoubleRotational { a, b, profile } => ResolvedChart {
                kind: ChartKind::G21 { a: *a, b: *b },
                profile: Cow::Borrowed(profile),
            },
            SurfaceFamily::M1 { b, profile } => ResolvedChart {
                kind: ChartKind::G22 { b: *b, mirror: MIRROR_M1 },
                profile: Cow::Borrowed(profile),
            },
            SurfaceFamily::M2 { b, profile } => ResolvedChart {
                kind: ChartKind::G22 { b: *b, mirror: MIRROR_M2 },
                profile: Cow::Borrowed(profile),
            },
            SurfaceFamily::DeSitterMinimal { r0, a, b } => ResolvedChart {
                kind: ChartKind::G21 { a: *a, b: *b },
                profile: Cow::Owned(ProfileCurve::HyperbolicArc { r0: *r0 }),
            },
            SurfaceFamily::Plane { kind, a, b } => match kind {
                PlaneKind::Zw => ResolvedChart {
                    kind: ChartKind::G21 { a: *a, b: *b },
                    profile: Cow::Owned(ProfileCurve::Line { x0: 0.0, x1: 0.0, w0: 1.0, w1: 0.0 }),
                },
                PlaneKind::X1X4 => ResolvedChart {
                    kind: ChartKind::G22 { b: *b, mirror: MIRROR_M1 },
                    profile: Cow::Owned(ProfileCurve::Line { x0: 0.0, x1: 0.0, w0: 1.0, w1: 0.0 }),
                },
            },
            SurfaceFamily::Cone { c0, w0, a, b } => {
                let g = (1.0 - c0 * c0).sqrt();
                ResolvedChart {
                    kind: ChartKind::G21 { a: *a, b: *b },
                    profile: Cow::Owned(ProfileCurve::Line {
                        x0: c0 / g,
                        x1: c0 * w0,
                        w0: 1.0 / g,
                        w1: *w0,
                    }),
                }
            }
        }
    }

    /// Order-3 profile jet at `s` in the chart's `(c1, c2)` convention.
    pub fn profile_jet(&self, s: f64) -> Result<ProfileJet> {
        self.chart().profile.jet(s)
    }

    /// Analytic immersion jet; see [`crate::jets::immersion_jet`].
    pub fn jet(&self, s: f64, t: f64) -> Result<ImmersionJet> {
        let chart = self.chart();
        let pj = chart.profile.jet(s)?;
        let terms = coord_terms(&chart.kind);
        let part = |m: usize, n: usize| position_partial(&terms, &pj, t, m, n, chart.kind.ambient());
        Ok(ImmersionJet {
            s,
            t,
            value: part(0, 0),
            ds: part(1, 0),
            dt: part(0, 1),
            dss: part(2, 0),
            dst: part(1, 1),
            dtt: part(0, 2),
            dsss: part(3, 0),
            dsst: part(2, 1),
            dstt: part(1, 2),
            dttt: part(0, 3),
        })
    }
}

// ---------------------------------------------------------------------------
// Coordinate tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
enum Trig {
    Cos,
    Sin,
    Sinh,
    Cosh,
}

impl Trig {
    /// `n`-th derivative at argument `u`.
    fn eval(self, u: f64, n: usize) -> f64 {
        match self {
            Trig::Cos => match n % 4 {
                0 => u.cos(),
                1 => -u.sin(),
                2 => -u.cos(),
                _ => u.sin(),
            },
            Trig::Sin => match n % 4 {
                0 => u.sin(),
                1 => u.cos(),
                2 => -u.sin(),
                _ => -u.cos(),
            },
            Trig::Sinh => {
                if n % 2 == 0 {
                    u.sinh()
                } else {
                    u.cosh()
                }
            }
            Trig::Cosh => {
                if n % 2 == 0 {
                    u.cosh()
                } else {
                    u.sinh()
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Comp {
    C1,
    C2,
}

type CoordTerm = (Comp, Trig, f64);

/// Per-coordinate factorisation `coord_k(s,t) = comp(s) · trig(rate · t)`.
fn coord_terms(kind: &ChartKind) -> [CoordTerm; 4] {
    match *kind {
        ChartKind::G21 { a, b } => [
            (Comp::C1, Trig::Cos, a),
            (Comp::C1, Trig::Sin, a),
            (Comp::C2, Trig::Sinh, b),
            (Comp::C2, Trig::Cosh, b),
        ],
        ChartKind::G22 { b, mirror } => {
            if mirror == MIRROR_M1 {
                [
                    (Comp::C2, Trig::Sinh, 1.0),
                    (Comp::C1, Trig::Cosh, b),
                    (Comp::C1, Trig::Sinh, b),
                    (Comp::C2, Trig::Cosh, 1.0),
                ]
            } else {
                [
                    (Comp::C2, Trig::Cos, 1.0),
                    (Comp::C2, Trig::Sin, 1.0),
                    (Comp::C1, Trig::Cos, b),
                    (Comp::C1, Trig::Sin, b),
                ]
            }
        }
    }
}

fn position_partial(
    terms: &[CoordTerm; 4],
    pj: &ProfileJet,
    t: f64,
    m: usize,
    n: usize,
    ambient: Ambient,
) -> PseudoVector {
    let mut coords = [0.0; 4];
    for (k, &(comp, trig, rate)) in terms.iter().enumerate() {
        let c = match comp {
            Comp::C1 => pj.c1[m],
            Comp::C2 => pj.c2[m],
        };
        coords[k] = c * rate.powi(n as i32) * trig.eval(rate * t, n);
    }
    PseudoVector::new(coords, ambient)
}

/// The rotation-transported in-plane normal of the profile: evaluating the
/// chart's position formula on the shifted pair `(c̃1, c̃2) = (c2′.., c1′..)`
/// yields `A · e_3` of the chart's reference frame for every chart.
pub(crate) fn anchor_partial(
    kind: &ChartKind,
    pj: &ProfileJet,
    t: f64,
    m: usize,
    n: usize,
) -> PseudoVector {
    debug_assert!(m <= 2);
    let shifted = ProfileJet {
        s: pj.s,
        c1: [pj.c2[1], pj.c2[2], pj.c2[3], 0.0],
        c2: [pj.c1[1], pj.c1[2], pj.c1[3], 0.0],
    };
    position_partial(&coord_terms(kind), &shifted, t, m, n, kind.ambient())
}

// ---------------------------------------------------------------------------
// Closed-form coefficient tables
// ---------------------------------------------------------------------------

/// One named entry of the closed-form coefficient tables, for fault
/// injection in mutation tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefKind {
    H311,
    H312,
    H322,
    H411,
    H412,
    H422,
    Om12E1,
    Om12E2,
    Om34E1,
    Om34E2,
}

impl CoefKind {
    pub const ALL: [CoefKind; 10] = [
        CoefKind::H311,
        CoefKind::H312,
        CoefKind::H322,
        CoefKind::H411,
        CoefKind::H412,
        CoefKind::H422,
        CoefKind::Om12E1,
        CoefKind::Om12E2,
        CoefKind::Om34E1,
        CoefKind::Om34E2,
    ];
}

/// Additive fault injected into one closed-form coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub kind: CoefKind,
    pub delta: f64,
}

/// Closed-form scalar data of a chart at one parameter point: regularity
/// scalars, causal signs, second-fundamental-form and connection
/// coefficients, and the analytic `s`-derivatives feeding `∇(tr A_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartScalars {
    pub eps: f64,
    pub eps_star: f64,
    pub q: f64,
    pub big_a: f64,
    pub h3: [f64; 3],
    pub h4: [f64; 3],
    pub om12: [f64; 2],
    pub om34: [f64; 2],
    /// `d/ds` of `h³₁₁`, `h³₂₂`, `h⁴₁₂` (plain parameter derivative).
    pub d_h3_11: f64,
    pub d_h3_22: f64,
    pub d_h4_12: f64,
    /// Frame causal signs `(ε_1, ε_2, ε_3, ε_4)`.
    pub signs: [f64; 4],
}

impl ChartScalars {
    pub fn h3_at(&self, i: usize, j: usize) -> f64 {
        sym_at(&self.h3, i, j)
    }

    pub fn h4_at(&self, i: usize, j: usize) -> f64 {
        sym_at(&self.h4, i, j)
    }
}

fn sym_at(h: &[f64; 3], i: usize, j: usize) -> f64 {
    match (i, j) {
        (0, 0) => h[0],
        (1, 1) => h[2],
        _ => h[1],
    }
}

fn apply_perturbation(sc: &mut ChartScalars, p: &Perturbation) {
    match p.kind {
        CoefKind::H311 => sc.h3[0] += p.delta,
        CoefKind::H312 => sc.h3[1] += p.delta,
        CoefKind::H322 => sc.h3[2] += p.delta,
        CoefKind::H411 => sc.h4[0] += p.delta,
        CoefKind::H412 => sc.h4[1] += p.delta,
        CoefKind::H422 => sc.h4[2] += p.delta,
        CoefKind::Om12E1 => sc.om12[0] += p.delta,
        CoefKind::Om12E2 => sc.om12[1] += p.delta,
        CoefKind::Om34E1 => sc.om34[0] += p.delta,
        CoefKind::Om34E2 => sc.om34[1] += p.delta,
    }
}

/// Evaluates the chart's closed-form coefficient tables at `s`, with an
/// optional injected fault.
pub(crate) fn closed_scalars(
    kind: &ChartKind,
    pj: &ProfileJet,
    perturb: Option<&Perturbation>,
) -> Result<ChartScalars> {
    let mut sc = match *kind {
        ChartKind::G21 { a, b } => {
            let (a2, b2) = (a * a, b * b);
            let (c1, c2) = (&pj.c1, &pj.c2);
            let d = a2 * c1[0] * c1[0] + b2 * c2[0] * c2[0];
            let q = d.sqrt();
            if q <= TAU_REG {
                return Err(Error::Degenerate(format!("q = {q:e} below regularity tolerance")));
            }
            let kappa = pj.curvature();
            let d_kappa = c2[1] * c1[3] - c1[1] * c2[3];
            let n322 = -(a2 * c1[0] * c2[1] + b2 * c2[0] * c1[1]);
            let n322_d = -(a2 * (c1[1] * c2[1] + c1[0] * c2[2]) + b2 * (c2[1] * c1[1] + c2[0] * c1[2]));
            let p412 = a * b * (c1[0] * c2[1] - c2[0] * c1[1]);
            let p412_d = a * b * (c1[0] * c2[2] - c2[0] * c1[2]);
            let d_d = 2.0 * (a2 * c1[0] * c1[1] + b2 * c2[0] * c2[1]);
            ChartScalars {
                eps: 1.0,
                eps_star: 1.0,
                q,
                big_a: 1.0,
                h3: [kappa, 0.0, n322 / d],
                h4: [0.0, p412 / d, 0.0],
                om12: [0.0, (a2 * c1[0] * c1[1] + b2 * c2[0] * c2[1]) / d],
                om34: [0.0, a * b * (c1[0] * c1[1] - c2[0] * c2[1]) / d],
                d_h3_11: d_kappa,
                d_h3_22: (n322_d * d - n322 * d_d) / (d * d),
                d_h4_12: (p412_d * d - p412 * d_d) / (d * d),
                signs: [-1.0, 1.0, 1.0, 1.0],
            }
        }
        ChartKind::G22 { b, mirror: m } => {
            let b2 = b * b;
            let (c1, c2) = (&pj.c1, &pj.c2);
            let d1 = c1[1] * c1[1] - c2[1] * c2[1];
            let d2 = c2[0] * c2[0] - b2 * c1[0] * c1[0];
            let big_a = d1.abs().sqrt();
            let q = d2.abs().sqrt();
            if big_a <= TAU_REG || q <= TAU_REG {
                return Err(Error::Degenerate(format!(
                    "regularity scalars A = {big_a:e}, q = {q:e} below tolerance"
                )));
            }
            let eps = (m * d1).signum();
            let eps_star = d2.signum();
            let ee = eps * eps_star;
            let qq = q * q;
            let w = big_a * qq;
            // d/ds of A and q²; A² = ε m d1, q² = ε* d2.
            let d_a = eps * m * (c1[1] * c1[2] - c2[1] * c2[2]) / big_a;
            let d_qq = eps_star * 2.0 * (c2[0] * c2[1] - b2 * c1[0] * c1[1]);
            let d_w = d_a * qq + big_a * d_qq;
            let n1 = b2 * c1[0] * c2[1] - c2[0] * c1[1];
            let n1_d = (b2 - 1.0) * c1[1] * c2[1] + b2 * c1[0] * c2[2] - c2[0] * c1[2];
            let n2 = m * (c2[1] * c1[2] - c1[1] * c2[2]);
            let n2_d = m * (c2[1] * c1[3] - c1[1] * c2[3]);
            let n3 = m * ee * b * (c2[0] * c1[1] - c1[0] * c2[1]);
            let n3_d = m * ee * b * (c2[0] * c1[2] - c1[0] * c2[2]);
            let a3 = big_a * big_a * big_a;
            ChartScalars {
                eps,
                eps_star,
                q,
                big_a,
                h3: [n1 / w, 0.0, n2 / a3],
                h4: [0.0, n3 / w, 0.0],
                om12: [(b2 * c1[0] * c1[1] - c2[0] * c2[1]) / w, 0.0],
                om34: [m * ee * b * (c2[0] * c2[1] - c1[0] * c1[1]) / w, 0.0],
                d_h3_11: (n1_d * w - n1 * d_w) / (w * w),
                d_h3_22: (n2_d * big_a - 3.0 * n2 * d_a) / (a3 * big_a),
                d_h4_12: (n3_d * w - n3 * d_w) / (w * w),
                signs: [eps_star, eps, -eps, -eps_star],
            }
        }
    };
    if let Some(p) = perturb {
        apply_perturbation(&mut sc, p);
    }
    Ok(sc)
}

// ---------------------------------------------------------------------------
// Spec-string construction (shared by the CLI and the Python bindings)
// ---------------------------------------------------------------------------

/// Parses `k=v` lists of the form `a=1,b=2`.
pub fn parse_kv(list: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("expected key=value, got '{item}'"))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn take_f64(map: &BTreeMap<String, String>, key: &str, default: Option<f64>) -> Result<f64> {
    match map.get(key) {
        Some(v) => v
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse {key}='{v}' as a number"))),
        None => default.ok_or_else(|| Error::InvalidParameter(format!("missing parameter '{key}'"))),
    }
}

/// Parses a profile spec such as `power:b0=1,exp=2` or `conic:l0=1,mu0=2`.
pub fn parse_profile(spec: &str) -> Result<ProfileCurve> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let kv = parse_kv(rest)?;
    match name {
        "line" => Ok(ProfileCurve::Line {
            x0: take_f64(&kv, "x0", Some(0.0))?,
            x1: take_f64(&kv, "x1", Some(0.0))?,
            w0: take_f64(&kv, "w0", Some(1.0))?,
            w1: take_f64(&kv, "w1", Some(0.0))?,
        }),
        "hyperbolic" => Ok(ProfileCurve::HyperbolicArc { r0: take_f64(&kv, "r0", Some(1.0))? }),
        "power" => Ok(ProfileCurve::Power {
            b0: take_f64(&kv, "b0", Some(1.0))?,
            exponent: take_f64(&kv, "exp", None)?,
        }),
        "conic" => Ok(ProfileCurve::Conic {
            lambda0: take_f64(&kv, "l0", None).or_else(|_| take_f64(&kv, "lambda0", None))?,
            mu0: take_f64(&kv, "mu0", None)?,
        }),
        "vranceanu" => Ok(ProfileCurve::Vranceanu { rate: take_f64(&kv, "rate", Some(0.1))? }),
        "ode" => {
            let smin = take_f64(&kv, "smin", Some(-0.5))?;
            let smax = take_f64(&kv, "smax", Some(0.5))?;
            ZeroMeanProfile::integrate(
                take_f64(&kv, "a", Some(1.0))?,
                take_f64(&kv, "b", Some(1.0))?,
                take_f64(&kv, "x0", Some(1.0))?,
                take_f64(&kv, "w0", Some(0.0))?,
                take_f64(&kv, "phi0", Some(0.0))?,
                (smin, smax),
                take_f64(&kv, "step", Some(1e-3))?,
            )
            .map(ProfileCurve::OdeGenerated)
        }
        other => Err(Error::InvalidParameter(format!("unknown profile type '{other}'"))),
    }
}

/// Builds a validated family from CLI-style strings: a family name
/// (`double`, `m1`, `m2`, `dsmin`, `plane`, `cone`), an optional profile
/// spec and a `k=v` parameter list.
pub fn make_family(family: &str, profile: Option<&str>, params: &str) -> Result<SurfaceFamily> {
    let kv = parse_kv(params)?;
    let profile_curve = profile.map(parse_profile).transpose()?;
    let need_profile = || -> Result<ProfileCurve> {
        profile_curve
            .clone()
            .ok_or_else(|| Error::InvalidParameter(format!("family '{family}' requires --profile")))
    };
    let fam = match family {
        "double" => SurfaceFamily::DoubleRotational {
            a: take_f64(&kv, "a", Some(1.0))?,
            b: take_f64(&kv, "b", Some(1.0))?,
            profile: need_profile()?,
        },
        "m1" => SurfaceFamily::M1 { b: take_f64(&kv, "b", Some(1.0))?, profile: need_profile()? },
        "m2" => SurfaceFamily::M2 { b: take_f64(&kv, "b", Some(1.0))?, profile: need_profile()? },
        "dsmin" => SurfaceFamily::DeSitterMinimal {
            r0: take_f64(&kv, "r0", Some(1.0))?,
            a: take_f64(&kv, "a", Some(1.0))?,
            b: take_f64(&kv, "b", Some(1.0))?,
        },
        "plane" => SurfaceFamily::Plane {
            kind: match kv.get("kind").map(|s| s.as_str()).unwrap_or("zw") {
                "zw" => PlaneKind::Zw,
                "x1x4" => PlaneKind::X1X4,
                other => {
                    return Err(Error::InvalidParameter(format!("unknown plane kind '{other}'")))
                }
            },
            a: take_f64(&kv, "a", Some(1.0))?,
            b: take_f64(&kv, "b", Some(1.0))?,
        },
        "cone" => SurfaceFamily::Cone {
            c0: take_f64(&kv, "c0", Some(0.5))?,
            w0: take_f64(&kv, "w0", Some(1.0))?,
            a: take_f64(&kv, "a", Some(1.0))?,
            b: take_f64(&kv, "b", Some(1.0))?,
        },
        other => return Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
    };
    fam.validate()?;
    Ok(fam)
}

/// Human-readable catalog listing for the `families` subcommand.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "double",
            "double rotational surface in E^4_1; params a,b; profiles line|hyperbolic|ode",
        ),
        ("m1", "rotational surface M1(b) in E^4_2; params b; profiles power|conic|vranceanu|line"),
        ("m2", "rotational surface M2(b) in E^4_2; params b; profiles power|conic|vranceanu|line"),
        ("dsmin", "parallel-H surface on the de Sitter quadric S^3_1(1/r0^2); params r0,a,b"),
        ("plane", "coordinate 2-plane; params kind=zw|x1x4,a,b"),
        ("cone", "timelike regular cone x = c0 w in E^4_1; params c0,w0,a,b"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_profile_jet_at_zero() {
        let p = ProfileCurve::HyperbolicArc { r0: 1.0 };
        let j = p.jet(0.0).unwrap();
        assert_eq!(j.c1[0], 1.0);
        assert_eq!(j.c1[1], 0.0);
        assert_eq!(j.c2[0], 0.0);
        assert_eq!(j.c2[1], 1.0);
        assert!((j.curvature() - 1.0).abs() < 1e-15);
        assert!(j.arc_length_defect().abs() < 1e-15);
    }

    #[test]
    fn power_profile_jet_values() {
        let p = ProfileCurve::Power { b0: 1.0, exponent: 2.0 };
        let j = p.jet(0.2).unwrap();
        assert!((j.c1[0] - 0.04).abs() < 1e-15);
        assert!((j.c1[1] - 0.4).abs() < 1e-15);
        assert!((j.c1[2] - 2.0).abs() < 1e-15);
        assert!(matches!(p.jet(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn line_profile_zero_curvature() {
        let p = ProfileCurve::Line { x0: 0.0, x1: 0.0, w0: 1.0, w1: 0.0 };
        for s in [-2.0, 0.3, 5.0] {
            assert_eq!(p.jet(s).unwrap().curvature(), 0.0);
        }
    }

    #[test]
    fn conic_parametrization_examples() {
        let j = conic_profile_parametrize(1.0, 2.0, std::f64::consts::FRAC_PI_4).unwrap();
        assert!((j.c2[0] - 1.0).abs() < 1e-14, "w = 1");
        assert!(j.c1[0].abs() < 1e-14, "y = 0");

        // Defining relation holds identically on both branches.
        for (l0, mu0) in [(1.0, 2.0), (-1.0, 1.0), (-2.0, -3.0), (0.7, 0.4)] {
            for k in 0..100 {
                let theta = -1.5 + 3.0 * (k as f64) / 99.0;
                let j = conic_profile_parametrize(l0, mu0, theta).unwrap();
                let (w, y) = (j.c2[0], j.c1[0]);
                let res = (w + y) * (w + y) + l0 * (w - y) * (w - y) - mu0;
                assert!(res.abs() < 1e-12, "relation residual {res:e} at theta {theta}");
            }
        }
        let j = conic_profile_parametrize(-1.0, 1.0, 0.7).unwrap();
        let (u, v) = (j.c2[0] + j.c1[0], j.c2[0] - j.c1[0]);
        assert!((u * u - v * v - 1.0).abs() < 1e-14);

        assert!(matches!(
            conic_profile_parametrize(0.0, 1.0, 0.1),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            conic_profile_parametrize(2.0, -1.0, 0.1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn make_family_validates_parameters() {
        assert!(make_family("dsmin", None, "r0=1,a=1,b=2").is_ok());
        assert!(matches!(
            make_family("m1", Some("conic:l0=0,mu0=1"), "b=1"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            make_family("m1", Some("power:b0=1,exp=2"), "b=0"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            make_family("cone", None, "c0=1.5"),
            Err(Error::InvalidParameter(_))
        ));
        let m1 = make_family("m1", Some("power:b0=1,exp=2"), "b=2").unwrap();
        assert!(matches!(m1, SurfaceFamily::M1 { .. }));
    }

    #[test]
    fn de_sitter_immersion_jet_reference_values() {
        let fam = SurfaceFamily::DeSitterMinimal { r0: 1.0, a: 1.0, b: 1.0 };
        let j = fam.jet(0.0, 0.0).unwrap();
        assert_eq!(j.value.coords, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(j.ds.coords, [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(j.dt.coords, [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn m2_tangent_at_t_zero() {
        // r_t(s, 0) = (0, x(s), 0, b z(s)) for the M2 chart.
        let fam = SurfaceFamily::M2 {
            b: 1.0,
            profile: ProfileCurve::Line { x0: 2.0, x1: 0.0, w0: 1.0, w1: 0.0 },
        };
        let j = fam.jet(0.7, 0.0).unwrap();
        assert!((j.dt.coords[0]).abs() < 1e-15);
        assert!((j.dt.coords[1] - 0.7).abs() < 1e-15);
        assert!((j.dt.coords[2]).abs() < 1e-15);
        assert!((j.dt.coords[3] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn mixed_partials_are_symmetric_by_construction() {
        let fam = SurfaceFamily::DeSitterMinimal { r0: 1.0, a: 1.0, b: 2.0 };
        let j = fam.jet(0.4, 0.9).unwrap();
        assert_eq!(j.partial(1, 1).coords, j.dst.coords);
    }

    #[test]
    fn zero_mean_ode_first_step_matches_hand_rk4() {
        // a=b=1, x(0)=1, w(0)=0, phi(0)=0: phi'(0) = -1, so phi(h) ~ -h.
        let p = ZeroMeanProfile::integrate(1.0, 1.0, 1.0, 0.0, 0.0, (-0.1, 0.1), 1e-3).unwrap();
        let st = p.state_at(1e-3).unwrap();
        assert!((st.phi + 1e-3).abs() < 1e-8, "phi(h) = {}", st.phi);
        // Arc-length identity is structural.
        for s in [-0.08, 0.0, 0.05] {
            let j = p.jet(s).unwrap();
            assert!(j.arc_length_defect().abs() < 1e-15);
        }
    }

    #[test]
    fn zero_mean_ode_rejects_degenerate_start() {
        assert!(matches!(
            ZeroMeanProfile::integrate(1.0, 1.0, 1e-5, 0.0, 0.0, (-0.1, 0.1), 1e-3),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn zero_mean_ode_is_not_the_hyperbolic_arc() {
        let p = ZeroMeanProfile::integrate(1.0, 1.0, 1.0, 0.0, 0.0, (0.0, 0.3), 1e-3).unwrap();
        let st = p.state_at(0.3).unwrap();
        assert!((st.x - (0.3f64).cosh()).abs() > 1e-3);
    }

    #[test]
    fn cone_profile_is_arc_length() {
        let fam = SurfaceFamily::Cone { c0: 0.5, w0: 1.0, a: 1.0, b: 1.0 };
        fam.validate().unwrap();
        let j = fam.profile_jet(0.4).unwrap();
        assert!(j.arc_length_defect().abs() < 1e-12);
        assert!((j.c1[0] - 0.5 * j.c2[0]).abs() < 1e-12, "x = c0 w");
    }
}
