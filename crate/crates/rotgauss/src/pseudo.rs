//! Indefinite linear and exterior algebra for `E^4_t` and `Λ²E^4_t`.
//!
//! The metric is `diag(+,...,+,-,...,-)` with the **last** `t` coordinates
//! negative. Bivectors are stored in Plücker coordinates on the fixed
//! lexicographic pair order `(12, 13, 14, 23, 24, 34)`; the induced inner
//! product on `Λ²E^4_t` is the determinant form
//! `⟨⟨u∧v, w∧z⟩⟩ = ⟨u,w⟩⟨v,z⟩ − ⟨u,z⟩⟨v,w⟩`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, TAU_NULL, TAU_REG};

/// Index pairs `(A, B)`, `A < B`, in the fixed Plücker order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Ambient signature of `E^4_t`: `t` of the four axes carry a minus sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ambient {
    t: u8,
}

impl Ambient {
    /// Euclidean `E^4_0`.
    pub const E4_0: Ambient = Ambient { t: 0 };
    /// Minkowski `E^4_1`.
    pub const E4_1: Ambient = Ambient { t: 1 };
    /// `E^4_2`.
    pub const E4_2: Ambient = Ambient { t: 2 };

    pub fn new(t: u8) -> Result<Self> {
        if t > 2 {
            return Err(Error::InvalidParameter(format!(
                "ambient index t must be 0, 1 or 2, got {t}"
            )));
        }
        Ok(Ambient { t })
    }

    pub fn index(self) -> usize {
        self.t as usize
    }

    /// Metric sign of axis `a ∈ 0..4` (last `t` axes are negative).
    pub fn axis_sign(self, a: usize) -> f64 {
        debug_assert!(a < 4);
        if a >= 4 - self.t as usize {
            -1.0
        } else {
            1.0
        }
    }

    /// `ε_A ε_B` for the `k`-th Plücker pair.
    pub fn pair_sign(self, k: usize) -> f64 {
        let (a, b) = PAIRS[k];
        self.axis_sign(a) * self.axis_sign(b)
    }
}

/// Causal character of a vector, decided by the sign of `⟨v,v⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

/// A point or vector of `E^4_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoVector {
    pub coords: [f64; 4],
    pub ambient: Ambient,
}

impl PseudoVector {
    pub fn new(coords: [f64; 4], ambient: Ambient) -> Self {
        PseudoVector { coords, ambient }
    }

    pub fn zero(ambient: Ambient) -> Self {
        PseudoVector::new([0.0; 4], ambient)
    }

    /// Ambient basis vector `E_a`, `a ∈ 0..4`.
    pub fn basis(a: usize, ambient: Ambient) -> Self {
        let mut coords = [0.0; 4];
        coords[a] = 1.0;
        PseudoVector::new(coords, ambient)
    }

    /// Indefinite inner product `Σ_{i ≤ 4−t} u_i v_i − Σ_{i > 4−t} u_i v_i`.
    ///
    /// Panics if the ambient signatures differ; mixing spaces is a
    /// programming error, not a data condition.
    pub fn inner(&self, other: &PseudoVector) -> f64 {
        assert_eq!(
            self.ambient, other.ambient,
            "inner product requires matching ambient signatures"
        );
        let mut acc = 0.0;
        for a in 0..4 {
            acc += self.ambient.axis_sign(a) * self.coords[a] * other.coords[a];
        }
        acc
    }

    /// Euclidean (auxiliary) norm of the coordinate 4-tuple.
    pub fn aux_norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Causal character with null tolerance `tau` (see [`TAU_NULL`]).
    pub fn causal_character_with(&self, tau: f64) -> CausalCharacter {
        let n = self.inner(self);
        if n > tau {
            CausalCharacter::Spacelike
        } else if n < -tau {
            CausalCharacter::Timelike
        } else if self.coords.iter().all(|c| *c == 0.0) {
            CausalCharacter::Spacelike
        } else {
            CausalCharacter::Lightlike
        }
    }

    pub fn causal_character(&self) -> CausalCharacter {
        self.causal_character_with(TAU_NULL)
    }

    pub fn add(&self, other: &PseudoVector) -> PseudoVector {
        assert_eq!(self.ambient, other.ambient);
        let mut coords = [0.0; 4];
        for a in 0..4 {
            coords[a] = self.coords[a] + other.coords[a];
        }
        PseudoVector::new(coords, self.ambient)
    }

    pub fn sub(&self, other: &PseudoVector) -> PseudoVector {
        assert_eq!(self.ambient, other.ambient);
        let mut coords = [0.0; 4];
        for a in 0..4 {
            coords[a] = self.coords[a] - other.coords[a];
        }
        PseudoVector::new(coords, self.ambient)
    }

    pub fn scale(&self, k: f64) -> PseudoVector {
        let mut coords = self.coords;
        for c in coords.iter_mut() {
            *c *= k;
        }
        PseudoVector::new(coords, self.ambient)
    }

    /// Unit vector parallel to `self` together with its sign `ε = ±1`.
    ///
    /// Errors if `|⟨v,v⟩|` is below `tau` (lightlike direction).
    pub fn normalize(&self, tau: f64) -> Result<(PseudoVector, f64)> {
        let n = self.inner(self);
        if n.abs() <= tau {
            return Err(Error::Degenerate(format!(
                "cannot normalize near-null vector, <v,v> = {n:e}"
            )));
        }
        Ok((self.scale(1.0 / n.abs().sqrt()), n.signum()))
    }
}

/// Element of `Λ²E^4_t` in Plücker coordinates, pair order `(12,13,14,23,24,34)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bivector {
    pub plucker: [f64; 6],
    pub ambient: Ambient,
}

impl Bivector {
    pub fn new(plucker: [f64; 6], ambient: Ambient) -> Self {
        Bivector { plucker, ambient }
    }

    pub fn zero(ambient: Ambient) -> Self {
        Bivector::new([0.0; 6], ambient)
    }

    /// Basis bivector `E_a ∧ E_b` (`a ≠ b`, order-sensitive).
    pub fn basis(a: usize, b: usize, ambient: Ambient) -> Self {
        wedge(
            &PseudoVector::basis(a, ambient),
            &PseudoVector::basis(b, ambient),
        )
    }

    pub fn add(&self, other: &Bivector) -> Bivector {
        assert_eq!(self.ambient, other.ambient);
        let mut p = [0.0; 6];
        for k in 0..6 {
            p[k] = self.plucker[k] + other.plucker[k];
        }
        Bivector::new(p, self.ambient)
    }

    pub fn sub(&self, other: &Bivector) -> Bivector {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Bivector {
        let mut p = self.plucker;
        for c in p.iter_mut() {
            *c *= k;
        }
        Bivector::new(p, self.ambient)
    }

    /// Euclidean norm of the six coordinates (signature-blind).
    pub fn aux_norm(&self) -> f64 {
        self.plucker.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Euclidean dot product of the six coordinates (signature-blind).
    pub fn aux_dot(&self, other: &Bivector) -> f64 {
        let mut acc = 0.0;
        for k in 0..6 {
            acc += self.plucker[k] * other.plucker[k];
        }
        acc
    }

    /// Plücker quadric residual `p12 p34 − p13 p24 + p14 p23`; zero iff
    /// decomposable.
    pub fn decomposability_residual(&self) -> f64 {
        let p = &self.plucker;
        p[0] * p[5] - p[1] * p[4] + p[2] * p[3]
    }
}

/// Wedge product `u ∧ v` with Plücker coordinates `p_AB = u_A v_B − u_B v_A`.
pub fn wedge(u: &PseudoVector, v: &PseudoVector) -> Bivector {
    assert_eq!(u.ambient, v.ambient, "wedge requires matching signatures");
    let mut p = [0.0; 6];
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        p[k] = u.coords[a] * v.coords[b] - u.coords[b] * v.coords[a];
    }
    Bivector::new(p, u.ambient)
}

/// Indefinite inner product on `Λ²E^4_t`: `Σ_{A<B} ε_A ε_B p_AB q_AB`.
pub fn bivector_inner(b1: &Bivector, b2: &Bivector) -> f64 {
    assert_eq!(b1.ambient, b2.ambient);
    let mut acc = 0.0;
    for k in 0..6 {
        acc += b1.ambient.pair_sign(k) * b1.plucker[k] * b2.plucker[k];
    }
    acc
}

// Complement pair index and permutation sign σ(A,B,C,D) for the Hodge map:
// (12)↔(34):+, (13)↔(24):−, (14)↔(23):+, and symmetrically back.
const HODGE_TABLE: [(usize, f64); 6] = [
    (5, 1.0),
    (4, -1.0),
    (3, 1.0),
    (2, 1.0),
    (1, -1.0),
    (0, 1.0),
];

/// Linear Hodge star on `Λ²E^4_t`: `*(E_A∧E_B) = ε_A ε_B σ(A,B,C,D) E_C∧E_D`.
///
/// For any positively oriented orthonormal frame, `*(e_1∧e_2) = ε_1 ε_2 e_3∧e_4`
/// and `** = ε_1 ε_2 ε_3 ε_4 = (−1)^t`.
pub fn hodge_star(b: &Bivector) -> Bivector {
    let mut p = [0.0; 6];
    for k in 0..6 {
        let (kc, sigma) = HODGE_TABLE[k];
        p[kc] += b.ambient.pair_sign(k) * sigma * b.plucker[k];
    }
    Bivector::new(p, b.ambient)
}

/// Orthogonal-plane complement of a decomposable non-null bivector.
///
/// Returns `orientation · *B`, so that with `orientation = +1` the standard
/// positively oriented basis maps `E_1∧E_2 ↦ E_3∧E_4`. Errors when
/// `|⟨⟨B,B⟩⟩|` falls below `TAU_NULL` (degenerate plane).
pub fn hodge_complement(b: &Bivector, orientation: f64) -> Result<Bivector> {
    let aux2 = b.aux_norm().powi(2);
    if b.decomposability_residual().abs() > 1e-9 * aux2.max(TAU_NULL) {
        return Err(Error::Degenerate(format!(
            "hodge complement needs a decomposable bivector, plucker residual = {:e}",
            b.decomposability_residual()
        )));
    }
    let n2 = bivector_inner(b, b);
    if n2.abs() < TAU_NULL {
        return Err(Error::Degenerate(format!(
            "hodge complement of near-null bivector, <<B,B>> = {n2:e}"
        )));
    }
    Ok(hodge_star(b).scale(orientation))
}

/// Interior product `ι_v (u∧w) = ⟨v,u⟩w − ⟨v,w⟩u`, extended bilinearly.
///
/// For a unit vector `v` inside the plane of a unit decomposable `B`, the
/// vector `ι_v B / ⟨v,v⟩` completes `v` to an orthonormal basis of that plane
/// with `v ∧ (ι_v B / ⟨v,v⟩) = B`.
pub fn interior_product(v: &PseudoVector, b: &Bivector) -> PseudoVector {
    assert_eq!(v.ambient, b.ambient);
    let mut out = [0.0; 4];
    for (k, &(a, c)) in PAIRS.iter().enumerate() {
        let p = b.plucker[k];
        // p · ι_v (E_a ∧ E_c) = p (⟨v,E_a⟩ E_c − ⟨v,E_c⟩ E_a)
        out[c] += p * v.ambient.axis_sign(a) * v.coords[a];
        out[a] -= p * v.ambient.axis_sign(c) * v.coords[c];
    }
    PseudoVector::new(out, v.ambient)
}

/// Orthonormalises `(v1, v2)` in the indefinite metric, recording signs.
///
/// The first output is parallel to `v1`. Errors when `v1` is near-lightlike
/// or the spanned plane is degenerate (`|g11 g22 − g12²| ≤ tau_reg` scale).
pub fn gram_schmidt_indefinite(
    v1: &PseudoVector,
    v2: &PseudoVector,
) -> Result<([PseudoVector; 2], [f64; 2])> {
    let g11 = v1.inner(v1);
    if g11.abs() <= TAU_REG {
        return Err(Error::Degenerate(format!(
            "gram-schmidt: first vector is near-lightlike, <v1,v1> = {g11:e}"
        )));
    }
    let g12 = v1.inner(v2);
    let g22 = v2.inner(v2);
    let gram_det = g11 * g22 - g12 * g12;
    if gram_det.abs() <= TAU_REG {
        return Err(Error::Degenerate(format!(
            "gram-schmidt: degenerate plane, gram determinant = {gram_det:e}"
        )));
    }
    let (e1, s1) = v1.normalize(TAU_REG)?;
    // Orthogonal component of v2: u = v2 − ε_1 ⟨v2, e1⟩ e1.
    let u = v2.sub(&e1.scale(s1 * v2.inner(&e1)));
    let (e2, s2) = u.normalize(TAU_REG)?;
    Ok(([e1, e2], [s1, s2]))
}

/// Which quadric the membership test targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadricKind {
    /// `S^3_t(x0, r²)`: level set `⟨x−x0, x−x0⟩ = r^{−2}`.
    Sphere,
    /// `H^3_{t−1}(x0, −r²)`: level set `⟨x−x0, x−x0⟩ = −r^{−2}`.
    Hyperbolic,
}

/// Residual of `x` against the quadric of constant curvature `±curvature`
/// centred at `center`; zero iff `x` lies on the quadric.
pub fn quadric_membership(
    x: &PseudoVector,
    center: &PseudoVector,
    curvature: f64,
    kind: QuadricKind,
) -> Result<f64> {
    if curvature == 0.0 {
        return Err(Error::InvalidParameter(
            "quadric membership requires nonzero curvature".into(),
        ));
    }
    let d = x.sub(center);
    let level = d.inner(&d);
    Ok(match kind {
        QuadricKind::Sphere => level - 1.0 / curvature,
        QuadricKind::Hyperbolic => level + 1.0 / curvature,
    })
}

/// Orthonormal moving frame `{e_1, e_2, e_3, e_4}` with signs `ε_A`.
///
/// `e_1, e_2` are tangent, `e_3, e_4` normal; `ε_1 ε_2 ε_3 ε_4 = (−1)^t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovingFrame {
    pub vectors: [PseudoVector; 4],
    pub signs: [f64; 4],
}

impl MovingFrame {
    pub fn e(&self, a: usize) -> &PseudoVector {
        &self.vectors[a]
    }

    /// Largest deviation from `⟨e_A, e_B⟩ = δ_AB ε_A`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in a..4 {
                let want = if a == b { self.signs[a] } else { 0.0 };
                let got = self.vectors[a].inner(&self.vectors[b]);
                worst = worst.max((got - want).abs());
            }
        }
        worst
    }

    pub fn tangent_wedge(&self) -> Bivector {
        wedge(&self.vectors[0], &self.vectors[1])
    }

    pub fn normal_wedge(&self) -> Bivector {
        wedge(&self.vectors[2], &self.vectors[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: [f64; 4], amb: Ambient) -> PseudoVector {
        PseudoVector::new(c, amb)
    }

    #[test]
    fn inner_signature_examples() {
        let u = v([0.0, 0.0, 0.0, 1.0], Ambient::E4_1);
        assert_eq!(u.inner(&u), -1.0);
        let u = v([0.0, 0.0, 1.0, 0.0], Ambient::E4_2);
        assert_eq!(u.inner(&u), -1.0);
        let u = v([1.0, 0.0, 0.0, 1.0], Ambient::E4_1);
        assert_eq!(u.inner(&u), 0.0);
    }

    #[test]
    #[should_panic(expected = "matching ambient signatures")]
    fn inner_rejects_mixed_ambients() {
        let u = v([1.0, 0.0, 0.0, 0.0], Ambient::E4_1);
        let w = v([1.0, 0.0, 0.0, 0.0], Ambient::E4_2);
        let _ = u.inner(&w);
    }

    #[test]
    fn causal_characters() {
        let amb = Ambient::E4_1;
        assert_eq!(
            v([1.0, 0.0, 0.0, 0.0], amb).causal_character(),
            CausalCharacter::Spacelike
        );
        assert_eq!(
            v([0.0, 0.0, 0.0, 2.0], amb).causal_character(),
            CausalCharacter::Timelike
        );
        assert_eq!(
            v([1.0, 0.0, 0.0, 1.0], amb).causal_character(),
            CausalCharacter::Lightlike
        );
        assert_eq!(
            v([0.0; 4], amb).causal_character(),
            CausalCharacter::Spacelike
        );
    }

    #[test]
    fn wedge_basis_and_hand_example() {
        let amb = Ambient::E4_1;
        let b = wedge(&PseudoVector::basis(2, amb), &PseudoVector::basis(3, amb));
        assert_eq!(b.plucker, [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);

        let u = v([1.0, 1.0, 0.0, 0.0], amb);
        let same = wedge(&u, &u);
        assert_eq!(same.plucker, [0.0; 6]);

        // u = (1,1,0,0), v = (0,0,1,0): p13 = 1, p23 = 1, rest 0.
        let w = wedge(&u, &v([0.0, 0.0, 1.0, 0.0], amb));
        assert_eq!(w.plucker, [0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn bivector_inner_basis_values() {
        let b34 = Bivector::basis(2, 3, Ambient::E4_1);
        assert_eq!(bivector_inner(&b34, &b34), -1.0);
        let b12 = Bivector::basis(0, 1, Ambient::E4_2);
        assert_eq!(bivector_inner(&b12, &b12), 1.0);
        let b12_1 = Bivector::basis(0, 1, Ambient::E4_1);
        let b34_1 = Bivector::basis(2, 3, Ambient::E4_1);
        assert_eq!(bivector_inner(&b12_1, &b34_1), 0.0);
    }

    #[test]
    fn hodge_on_standard_basis() {
        let amb = Ambient::E4_1;
        let got = hodge_complement(&Bivector::basis(0, 1, amb), 1.0).unwrap();
        assert_eq!(got.plucker, Bivector::basis(2, 3, amb).plucker);
    }

    #[test]
    fn hodge_double_application_is_signature_sign() {
        for amb in [Ambient::E4_0, Ambient::E4_1, Ambient::E4_2] {
            let sign = if amb.index() % 2 == 0 { 1.0 } else { -1.0 };
            for (k, &(a, b)) in PAIRS.iter().enumerate() {
                let e = Bivector::basis(a, b, amb);
                let twice = hodge_star(&hodge_star(&e));
                for j in 0..6 {
                    let want = if j == k { sign } else { 0.0 };
                    assert!(
                        (twice.plucker[j] - want).abs() < 1e-15,
                        "**E_{a}{b} mismatch in E4_{}",
                        amb.index()
                    );
                }
            }
        }
    }

    #[test]
    fn hodge_complement_orthogonal_to_tangent_wedges() {
        // hodge(e1∧e2) must be ⟨⟨,⟩⟩-orthogonal to every e_i∧e_j with i ∈ {1,2}.
        let amb = Ambient::E4_1;
        let e1 = v([0.3, -0.2, 0.1, 1.4], amb);
        let e2 = v([1.0, 0.4, -0.3, 0.2], amb);
        let ([f1, f2], _) = gram_schmidt_indefinite(&e1, &e2).unwrap();
        let star = hodge_complement(&wedge(&f1, &f2), 1.0).unwrap();
        // Complete to a full frame through interior products to get normals.
        for tangent in [&f1, &f2] {
            let contracted = interior_product(tangent, &star);
            assert!(
                contracted.aux_norm() < 1e-12,
                "normal-plane bivector must annihilate tangents"
            );
        }
    }

    #[test]
    fn hodge_rejects_null_plane() {
        let amb = Ambient::E4_1;
        // (E1 + E4) ∧ E2 spans a degenerate plane.
        let b = wedge(&v([1.0, 0.0, 0.0, 1.0], amb), &PseudoVector::basis(1, amb));
        assert!(matches!(
            hodge_complement(&b, 1.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn gram_schmidt_hand_example() {
        let amb = Ambient::E4_1;
        let ([e1, e2], [s1, s2]) =
            gram_schmidt_indefinite(&v([0.0, 0.0, 0.0, 2.0], amb), &v([1.0, 0.0, 0.0, 1.0], amb))
                .unwrap();
        assert_eq!(e1.coords, [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(s1, -1.0);
        assert_eq!(e2.coords, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s2, 1.0);
    }

    #[test]
    fn gram_schmidt_keeps_orthonormal_input() {
        let amb = Ambient::E4_2;
        let a = PseudoVector::basis(0, amb);
        let b = PseudoVector::basis(2, amb);
        let ([e1, e2], [s1, s2]) = gram_schmidt_indefinite(&a, &b).unwrap();
        assert_eq!(e1.coords, a.coords);
        assert_eq!(e2.coords, b.coords);
        assert_eq!((s1, s2), (1.0, -1.0));
    }

    #[test]
    fn gram_schmidt_rejects_dependent_input() {
        let amb = Ambient::E4_1;
        let a = v([1.0, 2.0, 0.0, 0.5], amb);
        assert!(matches!(
            gram_schmidt_indefinite(&a, &a),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn quadric_membership_examples() {
        let amb = Ambient::E4_1;
        let origin = PseudoVector::zero(amb);
        let r = quadric_membership(&origin, &origin, 1.0, QuadricKind::Sphere).unwrap();
        assert_eq!(r, -1.0);
        let x = v([0.0, 0.0, 0.0, 1.0], amb);
        let r = quadric_membership(&x, &origin, 1.0, QuadricKind::Hyperbolic).unwrap();
        assert_eq!(r, 0.0);
        assert!(matches!(
            quadric_membership(&x, &origin, 0.0, QuadricKind::Sphere),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn interior_product_completes_plane_basis() {
        let amb = Ambient::E4_1;
        let e3 = PseudoVector::basis(0, amb);
        let e4 = PseudoVector::basis(2, amb);
        let b = wedge(&e3, &e4);
        let got = interior_product(&e3, &b).scale(1.0 / e3.inner(&e3));
        assert_eq!(got.coords, e4.coords);
        let got = interior_product(&e4, &b).scale(1.0 / e4.inner(&e4));
        assert_eq!(got.coords, e3.scale(-1.0).coords);
    }
}
