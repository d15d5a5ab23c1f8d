//! Extrinsic geometry of a cataloged surface at a point: moving frame,
//! second fundamental form, connection forms, mean curvature, normal
//! curvature, Codazzi residuals, the Gauss map `ν = e_3 ∧ e_4`, and the
//! Laplacian of the Gauss map by two independent routes.
//!
//! The structural route assembles
//!
//! `Δν = ‖h‖²ν + 2 Σ_{j<k} ε_j ε_k R^D(e_j,e_k;e_3,e_4) e_j∧e_k
//!       + ∇(tr A_3)∧e_4 + e_3∧∇(tr A_4) + n Σ_j ε_j ω_34(e_j) H∧e_j`
//!
//! from the coefficient tables; the finite-difference route applies the
//! coordinate Laplace–Beltrami operator componentwise to sampled Gauss-map
//! values. The sign convention is the geometer's one, `Δr = −2H`.

use serde::{Deserialize, Serialize};

use crate::families::{
    anchor_partial, closed_scalars, ChartKind, ChartScalars, Perturbation, SurfaceFamily,
};
use crate::jets::FD_STEP;
use crate::pseudo::{
    bivector_inner, gram_schmidt_indefinite, hodge_star, interior_product, wedge, Bivector,
    MovingFrame, PseudoVector,
};
use crate::{Error, Result, TAU_REG};

/// Which coefficient route fills a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CoeffPath {
    /// The chart's closed-form coefficient tables (analytic `s`-derivatives).
    #[default]
    Closed,
    /// Jet-based projections `h^r_ij = ⟨∂²r, e_r⟩`, `ω_ij(e_k) = ⟨∇̃_{e_k}e_i, e_j⟩`
    /// (`s`-derivatives of traces by central differences).
    Generic,
}

/// Options threaded through geometry evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GeometryOptions {
    pub path: CoeffPath,
    /// Fault injection into the closed-form tables (mutation testing only).
    pub perturb: Option<Perturbation>,
}

impl GeometryOptions {
    pub fn generic() -> Self {
        GeometryOptions { path: CoeffPath::Generic, perturb: None }
    }
}

/// Full extrinsic data at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySample {
    pub s: f64,
    pub t: f64,
    pub frame: MovingFrame,
    /// Causal signs `ε`, `ε*` of the `E^4_2` charts (both `+1` on the
    /// double-rotational chart, whose signs are fixed).
    pub eps: f64,
    pub eps_star: f64,
    /// Regularity scalars: `q` scales `∂_t`, `A` scales `∂_s`.
    pub q: f64,
    pub big_a: f64,
    pub h3: [f64; 3],
    pub h4: [f64; 3],
    pub om12: [f64; 2],
    pub om34: [f64; 2],
    pub mean_curvature: PseudoVector,
    /// `⟨H, H⟩`.
    pub mean_sq: f64,
    /// `‖h‖²`.
    pub h_sq: f64,
    /// `R^D(e_1, e_2; e_3, e_4)`.
    pub rd: f64,
    pub nu: Bivector,
    /// Structural `Δν`.
    pub lap_nu: Bivector,
}

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

/// The chart's explicit (closed-form) orthonormal frame at `(s, t)`.
pub fn moving_frame(family: &SurfaceFamily, s: f64, t: f64) -> Result<MovingFrame> {
    let chart = family.chart();
    let pj = chart.profile.jet(s)?;
    let sc = closed_scalars(&chart.kind, &pj, None)?;
    let jet = family.jet(s, t)?;
    let ambient = chart.kind.ambient();
    match chart.kind {
        ChartKind::G21 { a, b } => {
            let e1 = jet.ds;
            let e2 = jet.dt.scale(1.0 / sc.q);
            let e3 = anchor_partial(&chart.kind, &pj, t, 0, 0);
            let (w, x) = (pj.c2[0], pj.c1[0]);
            let e4 = PseudoVector::new(
                [
                    b * w * (a * t).sin(),
                    -b * w * (a * t).cos(),
                    a * x * (b * t).cosh(),
                    a * x * (b * t).sinh(),
                ],
                ambient,
            )
            .scale(1.0 / sc.q);
            Ok(MovingFrame { vectors: [e1, e2, e3, e4], signs: sc.signs })
        }
        ChartKind::G22 { b, mirror } => {
            let e1 = jet.dt.scale(1.0 / sc.q);
            let e2 = jet.ds.scale(1.0 / sc.big_a);
            let e3 = anchor_partial(&chart.kind, &pj, t, 0, 0).scale(1.0 / sc.big_a);
            let ee = sc.eps * sc.eps_star;
            let (c1, c2) = (pj.c1[0], pj.c2[0]);
            let e4 = if mirror == crate::families::MIRROR_M1 {
                PseudoVector::new(
                    [
                        b * c1 * t.cosh(),
                        c2 * (b * t).sinh(),
                        c2 * (b * t).cosh(),
                        b * c1 * t.sinh(),
                    ],
                    ambient,
                )
            } else {
                PseudoVector::new(
                    [
                        b * c1 * t.sin(),
                        -b * c1 * t.cos(),
                        c2 * (b * t).sin(),
                        -c2 * (b * t).cos(),
                    ],
                    ambient,
                )
            }
            .scale(-ee / sc.q);
            Ok(MovingFrame { vectors: [e1, e2, e3, e4], signs: sc.signs })
        }
    }
}

/// Generic-path frame: indefinite Gram–Schmidt on the chart-ordered tangent
/// pair, then the normalized rotation-transported profile normal and its
/// interior-product complement inside the Hodge plane. Agrees with
/// [`moving_frame`] up to per-vector sign; signs are aligned here.
pub fn moving_frame_generic(family: &SurfaceFamily, s: f64, t: f64) -> Result<MovingFrame> {
    let chart = family.chart();
    let pj = chart.profile.jet(s)?;
    let jet = family.jet(s, t)?;
    let (u1, u2) = match chart.kind {
        ChartKind::G21 { .. } => (jet.ds, jet.dt),
        ChartKind::G22 { .. } => (jet.dt, jet.ds),
    };
    let ([mut e1, mut e2], [s1, s2]) = gram_schmidt_indefinite(&u1, &u2)?;
    let anchor = anchor_partial(&chart.kind, &pj, t, 0, 0);
    let (e3, s3) = anchor.normalize(TAU_REG)?;
    let nu = gauss_map(family, s, t)?;
    let e4 = interior_product(&e3, &nu).scale(1.0 / s3);
    let s4 = e4.inner(&e4).signum();
    // Per-vector sign alignment against the closed-form frame.
    let closed = moving_frame(family, s, t)?;
    for (e, c) in [(&mut e1, closed.e(0)), (&mut e2, closed.e(1))] {
        let mut overlap = 0.0;
        for a in 0..4 {
            overlap += e.coords[a] * c.coords[a];
        }
        if overlap < 0.0 {
            *e = e.scale(-1.0);
        }
    }
    Ok(MovingFrame { vectors: [e1, e2, e3, e4], signs: [s1, s2, s3, s4] })
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

/// Closed-form or jet-based coefficient bundle at `(s, t)`.
pub fn coefficients(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    options: &GeometryOptions,
) -> Result<ChartScalars> {
    match options.path {
        CoeffPath::Closed => {
            let chart = family.chart();
            let pj = chart.profile.jet(s)?;
            closed_scalars(&chart.kind, &pj, options.perturb.as_ref())
        }
        CoeffPath::Generic => generic_scalars(family, s, t),
    }
}

fn generic_scalars_no_deriv(family: &SurfaceFamily, s: f64, t: f64) -> Result<ChartScalars> {
    let chart = family.chart();
    let pj = chart.profile.jet(s)?;
    let jet = family.jet(s, t)?;
    let frame = moving_frame_generic(family, s, t)?;
    let [_, e2, e3, e4] = frame.vectors;

    // Second partials in the chart's tangent order (p1, p2).
    let (r11, r12, r22, u1, u2) = match chart.kind {
        ChartKind::G21 { .. } => (jet.dss, jet.dst, jet.dtt, jet.ds, jet.dt),
        ChartKind::G22 { .. } => (jet.dtt, jet.dst, jet.dss, jet.dt, jet.ds),
    };
    let c1 = 1.0 / u1.inner(&u1).abs().sqrt();
    let c2 = 1.0 / u2.inner(&u2).abs().sqrt();

    let h_of = |rr: &PseudoVector, ci: f64, cj: f64, er: &PseudoVector| ci * cj * rr.inner(er);
    let h3 = [h_of(&r11, c1, c1, &e3), h_of(&r12, c1, c2, &e3), h_of(&r22, c2, c2, &e3)];
    let h4 = [h_of(&r11, c1, c1, &e4), h_of(&r12, c1, c2, &e4), h_of(&r22, c2, c2, &e4)];
    // ω_12(e_k) = c_k c_1 ⟨r_{p1 p_k}, e_2⟩; the normalization derivative drops
    // because r_{p1} ⊥ e_2.
    let om12 = [c1 * c1 * r11.inner(&e2), c2 * c1 * r12.inner(&e2)];
    // ω_34(e_k) = c_k c_3 ⟨∂_{p_k} anchor, e_4⟩ with c_3 = |⟨anchor,anchor⟩|^{-1/2}.
    let anchor = anchor_partial(&chart.kind, &pj, t, 0, 0);
    let c3 = 1.0 / anchor.inner(&anchor).abs().sqrt();
    let (anchor_p1, anchor_p2) = match chart.kind {
        ChartKind::G21 { .. } => (
            anchor_partial(&chart.kind, &pj, t, 1, 0),
            anchor_partial(&chart.kind, &pj, t, 0, 1),
        ),
        ChartKind::G22 { .. } => (
            anchor_partial(&chart.kind, &pj, t, 0, 1),
            anchor_partial(&chart.kind, &pj, t, 1, 0),
        ),
    };
    let om34 = [c1 * c3 * anchor_p1.inner(&e4), c2 * c3 * anchor_p2.inner(&e4)];

    // Regularity scalars and causal signs mirror the chart definitions.
    let q = jet.dt.inner(&jet.dt).abs().sqrt();
    let big_a = jet.ds.inner(&jet.ds).abs().sqrt();
    if q <= TAU_REG || big_a <= TAU_REG {
        return Err(Error::Degenerate(format!(
            "regularity scalars A = {big_a:e}, q = {q:e} below tolerance"
        )));
    }
    let (eps, eps_star) = match chart.kind {
        ChartKind::G21 { .. } => (1.0, 1.0),
        ChartKind::G22 { .. } => (frame.signs[1], frame.signs[0]),
    };
    Ok(ChartScalars {
        eps,
        eps_star,
        q,
        big_a,
        h3,
        h4,
        om12,
        om34,
        d_h3_11: f64::NAN,
        d_h3_22: f64::NAN,
        d_h4_12: f64::NAN,
        signs: frame.signs,
    })
}

/// Jet-based coefficients; trace derivatives by central differences in `s`.
pub fn generic_scalars(family: &SurfaceFamily, s: f64, t: f64) -> Result<ChartScalars> {
    let mut sc = generic_scalars_no_deriv(family, s, t)?;
    let h = FD_STEP;
    let plus = generic_scalars_no_deriv(family, s + h, t)?;
    let minus = generic_scalars_no_deriv(family, s - h, t)?;
    sc.d_h3_11 = (plus.h3[0] - minus.h3[0]) / (2.0 * h);
    sc.d_h3_22 = (plus.h3[2] - minus.h3[2]) / (2.0 * h);
    sc.d_h4_12 = (plus.h4[1] - minus.h4[1]) / (2.0 * h);
    Ok(sc)
}

/// Second fundamental form coefficients `(h³, h⁴)` as `[11, 12, 22]` triples.
pub fn second_fundamental(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    options: &GeometryOptions,
) -> Result<([f64; 3], [f64; 3])> {
    let sc = coefficients(family, s, t, options)?;
    Ok((sc.h3, sc.h4))
}

/// Connection forms `(ω_12, ω_34)` evaluated on `(e_1, e_2)`.
pub fn connection_forms(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    options: &GeometryOptions,
) -> Result<([f64; 2], [f64; 2])> {
    let sc = coefficients(family, s, t, options)?;
    Ok((sc.om12, sc.om34))
}

// ---------------------------------------------------------------------------
// Pointwise curvature quantities
// ---------------------------------------------------------------------------

/// Trace of the Weingarten map `A_r`: `Σ_i ε_i h^r_ii`.
fn trace_a(sc: &ChartScalars, r: usize) -> f64 {
    let h = if r == 2 { &sc.h3 } else { &sc.h4 };
    sc.signs[0] * h[0] + sc.signs[1] * h[2]
}

/// Mean curvature vector `H = ½ Σ ε_i ε_r h^r_ii e_r` and `⟨H,H⟩`.
pub fn mean_curvature(sc: &ChartScalars, frame: &MovingFrame) -> (PseudoVector, f64) {
    let h3c = 0.5 * frame.signs[2] * trace_a(sc, 2);
    let h4c = 0.5 * frame.signs[3] * trace_a(sc, 3);
    let h = frame.e(2).scale(h3c).add(&frame.e(3).scale(h4c));
    let n2 = h.inner(&h);
    (h, n2)
}

/// Squared length `‖h‖² = Σ ε_i ε_j ε_r h^r_ij h^r_ji`.
pub fn squared_h(sc: &ChartScalars) -> f64 {
    let mut acc = 0.0;
    for (r, h) in [(2usize, &sc.h3), (3usize, &sc.h4)] {
        acc += sc.signs[r]
            * (h[0] * h[0] + h[2] * h[2] + 2.0 * sc.signs[0] * sc.signs[1] * h[1] * h[1]);
    }
    acc
}

/// Normal curvature `R^D(e_1, e_2; e_3, e_4) = Σ_i ε_i (h³_{i2} h⁴_{i1} − h³_{i1} h⁴_{i2})`.
pub fn normal_curvature_rd(sc: &ChartScalars) -> f64 {
    let mut acc = 0.0;
    for i in 0..2 {
        acc += sc.signs[i]
            * (sc.h3_at(i, 1) * sc.h4_at(i, 0) - sc.h3_at(i, 0) * sc.h4_at(i, 1));
    }
    acc
}

/// Directional derivative of a profile-only scalar along the unit frame
/// vectors: the `s`-flavoured direction carries `f'(s)` scaled by `1/A`,
/// the rotational direction kills it.
fn frame_derivatives_of_scalar(kind: &ChartKind, sc: &ChartScalars, df_ds: f64) -> [f64; 2] {
    match kind {
        ChartKind::G21 { .. } => [df_ds / sc.big_a, 0.0],
        ChartKind::G22 { .. } => [0.0, df_ds / sc.big_a],
    }
}

/// Normal-connection derivative of the mean curvature vector,
/// `(D_{e_1} H, D_{e_2} H)` as ambient normal vectors.
pub fn normal_derivative_dh(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    options: &GeometryOptions,
) -> Result<[PseudoVector; 2]> {
    let chart = family.chart();
    let sc = coefficients(family, s, t, options)?;
    let frame = match options.path {
        CoeffPath::Closed => moving_frame(family, s, t)?,
        CoeffPath::Generic => moving_frame_generic(family, s, t)?,
    };
    let h3c = 0.5 * frame.signs[2] * (sc.signs[0] * sc.h3[0] + sc.signs[1] * sc.h3[2]);
    let h4c = 0.5 * frame.signs[3] * (sc.signs[0] * sc.h4[0] + sc.signs[1] * sc.h4[2]);
    let dh3c_ds = 0.5 * frame.signs[2] * (sc.signs[0] * sc.d_h3_11 + sc.signs[1] * sc.d_h3_22);
    let e_h3 = frame_derivatives_of_scalar(&chart.kind, &sc, dh3c_ds);
    // h⁴ has zero trace on every cataloged chart; its derivative vanishes.
    let e_h4 = [0.0, 0.0];
    let mut out = [PseudoVector::zero(family.ambient()); 2];
    for i in 0..2 {
        let c3 = e_h3[i] - h4c * frame.signs[2] * sc.om34[i];
        let c4 = e_h4[i] + h3c * frame.signs[3] * sc.om34[i];
        out[i] = frame.e(2).scale(c3).add(&frame.e(3).scale(c4));
    }
    Ok(out)
}

/// Residuals of the two specialized Codazzi identities; the left-hand
/// derivative is a five-point (fourth-order) central difference of the
/// closed-form coefficient, so truncation stays below the 1e-6 gate even
/// where the coefficients steepen near the domain edge.
pub fn codazzi_residual(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    options: &GeometryOptions,
) -> Result<(f64, f64)> {
    let chart = family.chart();
    let h = FD_STEP;
    let sc = coefficients(family, s, t, options)?;
    let p1 = coefficients(family, s + h, t, options)?;
    let m1 = coefficients(family, s - h, t, options)?;
    let p2 = coefficients(family, s + 2.0 * h, t, options)?;
    let m2 = coefficients(family, s - 2.0 * h, t, options)?;
    let fd_h3 = |sel: fn(&ChartScalars) -> f64| {
        (-sel(&p2) + 8.0 * sel(&p1) - 8.0 * sel(&m1) + sel(&m2)) / (12.0 * h)
    };
    match chart.kind {
        ChartKind::G21 { .. } => {
            // e_1(h³₂₂) = −ω₁₂(e₂)(h³₁₁ + h³₂₂) − h⁴₁₂ ω₃₄(e₂)
            let r1 = fd_h3(|c| c.h3[2]) + sc.om12[1] * (sc.h3[0] + sc.h3[2]) + sc.h4[1] * sc.om34[1];
            // e_1(h⁴₁₂) = −2 h⁴₁₂ ω₁₂(e₂) + h³₁₁ ω₃₄(e₂)
            let r2 = fd_h3(|c| c.h4[1]) + 2.0 * sc.h4[1] * sc.om12[1] - sc.h3[0] * sc.om34[1];
            Ok((r1.abs(), r2.abs()))
        }
        ChartKind::G22 { .. } => {
            let (e, es) = (sc.eps, sc.eps_star);
            // e_2(h³₁₁) = ε* h⁴₁₂ ω₃₄(e₁) + ω₁₂(e₁)(ε* h³₁₁ − ε h³₂₂)
            let r1 = fd_h3(|c| c.h3[0]) / sc.big_a
                - es * sc.h4[1] * sc.om34[0]
                - sc.om12[0] * (es * sc.h3[0] - e * sc.h3[2]);
            // e_2(h⁴₁₂) = −ε h³₂₂ ω₃₄(e₁) + 2 ε* h⁴₁₂ ω₁₂(e₁)
            let r2 = fd_h3(|c| c.h4[1]) / sc.big_a + e * sc.h3[2] * sc.om34[0]
                - 2.0 * es * sc.h4[1] * sc.om12[0];
            Ok((r1.abs(), r2.abs()))
        }
    }
}

// ---------------------------------------------------------------------------
// Gauss map and its Laplacian
// ---------------------------------------------------------------------------

/// Gauss map `ν = e_3 ∧ e_4`: the Hodge complement of the normalized
/// tangent plane, oriented to coincide with the closed-form frame wedge.
pub fn gauss_map(family: &SurfaceFamily, s: f64, t: f64) -> Result<Bivector> {
    let chart = family.chart();
    let jet = family.jet(s, t)?;
    let (u1, u2) = match chart.kind {
        ChartKind::G21 { .. } => (jet.ds, jet.dt),
        ChartKind::G22 { .. } => (jet.dt, jet.ds),
    };
    let tangent = wedge(&u1, &u2);
    let n2 = bivector_inner(&tangent, &tangent);
    // <<T,T>> equals the metric Gram determinant g11 g22 − g12²; judge
    // degeneracy against the Gram entries, not the (signature-blind)
    // coordinate size, which grows like cosh²(bt).
    let gram_scale =
        (u1.inner(&u1) * u2.inner(&u2)).abs() + u1.inner(&u2).powi(2);
    if n2.abs() <= TAU_REG * gram_scale.max(TAU_REG) {
        return Err(Error::Degenerate(format!(
            "tangent plane is numerically degenerate, <<T,T>> = {n2:e}"
        )));
    }
    let unit = tangent.scale(1.0 / n2.abs().sqrt());
    let star = hodge_star(&unit);
    let reference = moving_frame(family, s, t)?.normal_wedge();
    let orient = if star.aux_dot(&reference) >= 0.0 { 1.0 } else { -1.0 };
    Ok(star.scale(orient))
}

/// Structural Laplacian of the Gauss map at `(s, t)`.
pub fn laplacian_gauss_structural(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    options: &GeometryOptions,
) -> Result<Bivector> {
    let chart = family.chart();
    let sc = coefficients(family, s, t, options)?;
    let frame = match options.path {
        CoeffPath::Closed => moving_frame(family, s, t)?,
        CoeffPath::Generic => moving_frame_generic(family, s, t)?,
    };
    let [e1, e2, e3, e4] = frame.vectors;
    let nu = frame.normal_wedge();

    let mut lap = nu.scale(squared_h(&sc));

    let rd = normal_curvature_rd(&sc);
    lap = lap.add(&wedge(&e1, &e2).scale(2.0 * sc.signs[0] * sc.signs[1] * rd));

    // ∇(tr A_3) ∧ e_4 + e_3 ∧ ∇(tr A_4); tr A_4 ≡ 0 on the catalog but both
    // terms are assembled for symmetry.
    let d_tr3 = sc.signs[0] * sc.d_h3_11 + sc.signs[1] * sc.d_h3_22;
    let e_tr3 = frame_derivatives_of_scalar(&chart.kind, &sc, d_tr3);
    let grad3 = e1.scale(sc.signs[0] * e_tr3[0]).add(&e2.scale(sc.signs[1] * e_tr3[1]));
    lap = lap.add(&wedge(&grad3, &e4));
    let grad4 = PseudoVector::zero(family.ambient());
    lap = lap.add(&wedge(&e3, &grad4));

    let (h, _) = mean_curvature(&sc, &frame);
    for (j, ej) in [e1, e2].iter().enumerate() {
        lap = lap.add(&wedge(&h, ej).scale(2.0 * sc.signs[j] * sc.om34[j]));
    }
    Ok(lap)
}

/// Coordinate Laplace–Beltrami operator (geometer's sign, `Δr = −2H`)
/// applied componentwise to a map sampled at a 9-point stencil; the metric
/// coefficients are analytic, only the map is differenced.
pub fn laplace_beltrami_fd<const N: usize, F>(
    family: &SurfaceFamily,
    f: F,
    s: f64,
    t: f64,
    h: f64,
) -> Result<[f64; N]>
where
    F: Fn(f64, f64) -> Result<[f64; N]>,
{
    let jet = family.jet(s, t)?;
    let g11 = jet.ds.inner(&jet.ds);
    let g12 = jet.ds.inner(&jet.dt);
    let g22 = jet.dt.inner(&jet.dt);
    let det = g11 * g22 - g12 * g12;
    if det.abs() <= TAU_REG {
        return Err(Error::Degenerate(format!("metric determinant {det:e} below tolerance")));
    }
    let sgn = det.signum();
    let w = det.abs().sqrt();

    // Analytic first derivatives of the metric from second jets.
    let dg11 = [2.0 * jet.dss.inner(&jet.ds), 2.0 * jet.dst.inner(&jet.ds)];
    let dg22 = [2.0 * jet.dst.inner(&jet.dt), 2.0 * jet.dtt.inner(&jet.dt)];
    let dg12 = [
        jet.dss.inner(&jet.dt) + jet.ds.inner(&jet.dst),
        jet.dst.inner(&jet.dt) + jet.ds.inner(&jet.dtt),
    ];
    let ddet = [
        dg11[0] * g22 + g11 * dg22[0] - 2.0 * g12 * dg12[0],
        dg11[1] * g22 + g11 * dg22[1] - 2.0 * g12 * dg12[1],
    ];
    let dw = [sgn * ddet[0] / (2.0 * w), sgn * ddet[1] / (2.0 * w)];

    // W g^{ij} = sgn · (cofactor) / W; differentiate by the quotient rule.
    let d_inv = |num: f64, dnum: f64, k: usize| sgn * (dnum / w - num * dw[k] / (w * w));

    let gss = g22 / det;
    let gst = -g12 / det;
    let gtt = g11 / det;
    let b_s = (d_inv(g22, dg22[0], 0) + d_inv(-g12, -dg12[1], 1)) / w;
    let b_t = (d_inv(-g12, -dg12[0], 0) + d_inv(g11, dg11[1], 1)) / w;

    let fc = f(s, t)?;
    let fsp = f(s + h, t)?;
    let fsm = f(s - h, t)?;
    let ftp = f(s, t + h)?;
    let ftm = f(s, t - h)?;
    let fpp = f(s + h, t + h)?;
    let fpm = f(s + h, t - h)?;
    let fmp = f(s - h, t + h)?;
    let fmm = f(s - h, t - h)?;

    let mut out = [0.0; N];
    for k in 0..N {
        let fs = (fsp[k] - fsm[k]) / (2.0 * h);
        let ft = (ftp[k] - ftm[k]) / (2.0 * h);
        let fss = (fsp[k] - 2.0 * fc[k] + fsm[k]) / (h * h);
        let ftt = (ftp[k] - 2.0 * fc[k] + ftm[k]) / (h * h);
        let fst = (fpp[k] - fpm[k] - fmp[k] + fmm[k]) / (4.0 * h * h);
        let lb = gss * fss + 2.0 * gst * fst + gtt * ftt + b_s * fs + b_t * ft;
        out[k] = -lb;
    }
    Ok(out)
}

/// Finite-difference Laplacian of the Gauss map, `O(h²)` accurate.
pub fn laplacian_gauss_fd(family: &SurfaceFamily, s: f64, t: f64, h: f64) -> Result<Bivector> {
    let p = laplace_beltrami_fd::<6, _>(family, |ss, tt| Ok(gauss_map(family, ss, tt)?.plucker), s, t, h)?;
    Ok(Bivector::new(p, family.ambient()))
}

/// Finite-difference Laplacian of the position map; equals `−2H` up to `O(h²)`.
pub fn laplacian_position_fd(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    h: f64,
) -> Result<PseudoVector> {
    let p = laplace_beltrami_fd::<4, _>(family, |ss, tt| Ok(family.jet(ss, tt)?.value.coords), s, t, h)?;
    Ok(PseudoVector::new(p, family.ambient()))
}

// ---------------------------------------------------------------------------
// Sample assembly and grids
// ---------------------------------------------------------------------------

/// Computes the full extrinsic package at one point.
pub fn geometry_sample(
    family: &SurfaceFamily,
    s: f64,
    t: f64,
    options: &GeometryOptions,
) -> Result<GeometrySample> {
    let sc = coefficients(family, s, t, options)?;
    let frame = match options.path {
        CoeffPath::Closed => moving_frame(family, s, t)?,
        CoeffPath::Generic => moving_frame_generic(family, s, t)?,
    };
    let (h, mean_sq) = mean_curvature(&sc, &frame);
    let nu = gauss_map(family, s, t)?;
    let lap_nu = laplacian_gauss_structural(family, s, t, options)?;
    Ok(GeometrySample {
        s,
        t,
        eps: sc.eps,
        eps_star: sc.eps_star,
        q: sc.q,
        big_a: sc.big_a,
        h3: sc.h3,
        h4: sc.h4,
        om12: sc.om12,
        om34: sc.om34,
        mean_curvature: h,
        mean_sq,
        h_sq: squared_h(&sc),
        rd: normal_curvature_rd(&sc),
        nu,
        lap_nu,
        frame,
    })
}

/// Rectangular parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s_min: f64,
    pub s_max: f64,
    pub ns: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(s: (f64, f64, usize), t: (f64, f64, usize)) -> Result<Self> {
        if s.2 < 2 || t.2 < 2 || !(s.0 < s.1) || !(t.0 < t.1) {
            return Err(Error::InvalidParameter(format!(
                "grid ranges must be increasing with at least 2 points per axis, got {s:?} x {t:?}"
            )));
        }
        Ok(GridSpec { s_min: s.0, s_max: s.1, ns: s.2, t_min: t.0, t_max: t.1, nt: t.2 })
    }

    pub fn s_at(&self, i: usize) -> f64 {
        self.s_min + (self.s_max - self.s_min) * (i as f64) / ((self.ns - 1) as f64)
    }

    pub fn t_at(&self, j: usize) -> f64 {
        self.t_min + (self.t_max - self.t_min) * (j as f64) / ((self.nt - 1) as f64)
    }

    pub fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / ((self.ns - 1) as f64)
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / ((self.nt - 1) as f64)
    }
}

/// Grid of samples; points where `|q|` or `|A|` drops below the regularity
/// tolerance (or the profile domain ends) are masked out.
#[derive(Debug, Clone)]
pub struct Grid {
    pub spec: GridSpec,
    pub samples: Vec<Option<GeometrySample>>,
}

impl Grid {
    pub fn at(&self, i: usize, j: usize) -> Option<&GeometrySample> {
        self.samples[i * self.spec.nt + j].as_ref()
    }

    pub fn unmasked(&self) -> impl Iterator<Item = &GeometrySample> {
        self.samples.iter().filter_map(|s| s.as_ref())
    }

    pub fn unmasked_count(&self) -> usize {
        self.samples.iter().filter(|s| s.is_some()).count()
    }
}

/// Sweeps the grid, masking degenerate or out-of-domain points.
pub fn sample_grid(family: &SurfaceFamily, spec: &GridSpec, options: &GeometryOptions) -> Result<Grid> {
    let mut samples = Vec::with_capacity(spec.ns * spec.nt);
    for i in 0..spec.ns {
        for j in 0..spec.nt {
            match geometry_sample(family, spec.s_at(i), spec.t_at(j), options) {
                Ok(sample) => samples.push(Some(sample)),
                Err(Error::Degenerate(_)) | Err(Error::Domain(_)) => samples.push(None),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Grid { spec: *spec, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::ProfileCurve;

    fn de_sitter() -> SurfaceFamily {
        SurfaceFamily::DeSitterMinimal { r0: 1.0, a: 1.0, b: 1.0 }
    }

    #[test]
    fn de_sitter_frame_at_origin() {
        let f = moving_frame(&de_sitter(), 0.0, 0.0).unwrap();
        assert_eq!(f.e(2).coords, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(f.e(3).coords, [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(f.signs, [-1.0, 1.0, 1.0, 1.0]);
        assert!(f.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn de_sitter_closed_coefficients() {
        let fam = de_sitter();
        let opts = GeometryOptions::default();
        for s in [-0.7, 0.0, 0.4, 1.0] {
            let sc = coefficients(&fam, s, 0.3, &opts).unwrap();
            assert!((sc.h3[0] - 1.0).abs() < 1e-12, "h3_11 = kappa = 1");
            assert!((sc.h3[2] + 1.0).abs() < 1e-12, "h3_22 = -1");
            assert!(sc.om34[1].abs() < 1e-14, "om34(e2) = 0");
        }
        let sc = coefficients(&fam, 1.0, 0.0, &opts).unwrap();
        let q2 = (1.0f64.cosh().powi(2) + 1.0f64.sinh().powi(2)).recip();
        assert!((sc.h4[1] - q2).abs() < 1e-12, "h4_12 = 1/q^2 at s=1");
        let sc0 = coefficients(&fam, 0.0, 0.0, &opts).unwrap();
        assert!((sc0.h4[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn de_sitter_mean_curvature_and_invariants() {
        let fam = de_sitter();
        let opts = GeometryOptions::default();
        let sc = coefficients(&fam, 0.0, 0.0, &opts).unwrap();
        let frame = moving_frame(&fam, 0.0, 0.0).unwrap();
        let (h, n2) = mean_curvature(&sc, &frame);
        assert_eq!(h.coords, [-1.0, 0.0, 0.0, 0.0], "H = -e3 at the origin");
        assert!((n2 - 1.0).abs() < 1e-14);
        assert!(squared_h(&sc).abs() < 1e-14, "||h||^2 = 0 at s=0 for a=b=1");
        assert!(normal_curvature_rd(&sc).abs() < 1e-14);
        let sc1 = coefficients(&fam, 1.0, 0.0, &opts).unwrap();
        let expect = 2.0 * (1.0 - (1.0f64.cosh().powi(2) + 1.0f64.sinh().powi(2)).powi(-2));
        assert!((squared_h(&sc1) - expect).abs() < 1e-12);
        assert!(normal_curvature_rd(&sc1).abs() < 1e-14, "flat normal bundle");
    }

    #[test]
    fn de_sitter_gauss_map_at_origin() {
        let nu = gauss_map(&de_sitter(), 0.0, 0.0).unwrap();
        // e3 = E1, e4 = E3: nu = E1 ∧ E3.
        assert!((nu.plucker[1] - 1.0).abs() < 1e-14);
        for k in [0, 2, 3, 4, 5] {
            assert!(nu.plucker[k].abs() < 1e-14);
        }
        let n2 = bivector_inner(&nu, &nu);
        assert!((n2 - 1.0).abs() < 1e-12, "<<nu,nu>> = eps3 eps4 = 1");
    }

    #[test]
    fn gauss_map_matches_frame_wedge_on_catalog() {
        let fams = [
            de_sitter(),
            SurfaceFamily::M1 { b: 2.0, profile: ProfileCurve::Power { b0: 1.0, exponent: 2.0 } },
            SurfaceFamily::M2 { b: 2.0, profile: ProfileCurve::Power { b0: 1.0, exponent: 2.0 } },
            SurfaceFamily::Cone { c0: 0.5, w0: 1.0, a: 1.0, b: 1.0 },
        ];
        for fam in &fams {
            let (s, t) = if matches!(fam, SurfaceFamily::M1 { .. } | SurfaceFamily::M2 { .. }) {
                (0.25, 0.4)
            } else {
                (0.5, 0.7)
            };
            let nu = gauss_map(fam, s, t).unwrap();
            let reference = moving_frame(fam, s, t).unwrap().normal_wedge();
            let diff = nu.sub(&reference).aux_norm();
            assert!(diff < 1e-12, "hodge route must coincide with the frame wedge, diff {diff:e}");
        }
    }

    #[test]
    fn de_sitter_structural_laplacian_is_first_kind() {
        let fam = SurfaceFamily::DeSitterMinimal { r0: 1.0, a: 1.0, b: 2.0 };
        let opts = GeometryOptions::default();
        for (s, t) in [(0.0, 0.0), (0.5, 0.9), (-0.8, 2.0)] {
            let nu = gauss_map(&fam, s, t).unwrap();
            let lap = laplacian_gauss_structural(&fam, s, t, &opts).unwrap();
            let sc = coefficients(&fam, s, t, &opts).unwrap();
            let expect = nu.scale(squared_h(&sc));
            let rel = lap.sub(&expect).aux_norm() / nu.aux_norm().max(1.0);
            assert!(rel < 1e-12, "Δν = ‖h‖² ν on the de Sitter family, defect {rel:e}");
        }
    }

    #[test]
    fn position_laplacian_matches_minus_two_h() {
        let fam = SurfaceFamily::DeSitterMinimal { r0: 1.0, a: 1.0, b: 2.0 };
        let opts = GeometryOptions::default();
        let (s, t) = (0.3, 0.8);
        let lap_r = laplacian_position_fd(&fam, s, t, 1e-3).unwrap();
        let sc = coefficients(&fam, s, t, &opts).unwrap();
        let frame = moving_frame(&fam, s, t).unwrap();
        let (h, _) = mean_curvature(&sc, &frame);
        let diff = lap_r.sub(&h.scale(-2.0)).aux_norm();
        assert!(diff < 1e-6, "Δr = -2H sign anchor, diff = {diff:e}");
    }

    #[test]
    fn masked_grid_skips_degenerate_points() {
        // The plane profile w = s passes through q = 0 at s = 0.
        let fam = SurfaceFamily::Plane { kind: crate::families::PlaneKind::Zw, a: 1.0, b: 1.0 };
        let spec = GridSpec::new((-0.5, 0.5, 5), (0.1, 1.0, 4)).unwrap();
        let grid = sample_grid(&fam, &spec, &GeometryOptions::default()).unwrap();
        assert!(grid.unmasked_count() < 20);
        assert!(grid.unmasked_count() >= 12);
    }
}
