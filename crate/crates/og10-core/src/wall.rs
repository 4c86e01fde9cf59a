//! Divisor classification on OG10-type manifolds: wall divisors, stably
//! prime exceptional divisors, integral reflections, half-integral splits
//! and projections to the exceptional-divisor orthogonal.
//!
//! Classification is a pure function of (square, divisibility), with the
//! divisibility always computed in the full OG10 lattice. Classes living in
//! a smaller Picard lattice must come with an embedding into OG10; the
//! moduli and cone modules provide verified ones.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{Class, Lattice, LatticeError};
use crate::matrix::{int, Int, IntMatrix, Rat, RatVector};

/// The four wall-divisor types of OG10, as (square, divisibility) pairs.
/// `codimension` records the dimension drop of the covered subvariety
/// reported alongside the classification; it is metadata the lattice
/// calculus cannot verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallType {
    NegTwoDivOne,
    NegFourDivOne,
    NegSixDivThree,
    NegTwentyFourDivThree,
}

impl WallType {
    pub const ALL: [WallType; 4] = [
        WallType::NegTwoDivOne,
        WallType::NegFourDivOne,
        WallType::NegSixDivThree,
        WallType::NegTwentyFourDivThree,
    ];

    pub fn square(self) -> i64 {
        match self {
            WallType::NegTwoDivOne => -2,
            WallType::NegFourDivOne => -4,
            WallType::NegSixDivThree => -6,
            WallType::NegTwentyFourDivThree => -24,
        }
    }

    pub fn divisibility(self) -> i64 {
        match self {
            WallType::NegTwoDivOne | WallType::NegFourDivOne => 1,
            WallType::NegSixDivThree | WallType::NegTwentyFourDivThree => 3,
        }
    }

    /// Codimension of the subvariety covered by curves dual to the wall.
    pub fn codimension(self) -> u32 {
        match self {
            WallType::NegTwoDivOne | WallType::NegSixDivThree => 1,
            WallType::NegFourDivOne => 5,
            WallType::NegTwentyFourDivThree => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WallType::NegTwoDivOne => "NegTwoDivOne",
            WallType::NegFourDivOne => "NegFourDivOne",
            WallType::NegSixDivThree => "NegSixDivThree",
            WallType::NegTwentyFourDivThree => "NegTwentyFourDivThree",
        }
    }

    pub fn from_invariants(square: &Int, div: &Int) -> Option<WallType> {
        WallType::ALL
            .into_iter()
            .find(|t| *square == int(t.square()) && *div == int(t.divisibility()))
    }
}

/// The two stably-prime-exceptional types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PexType {
    NegTwoDivOne,
    NegSixDivThree,
}

impl PexType {
    pub const ALL: [PexType; 2] = [PexType::NegTwoDivOne, PexType::NegSixDivThree];

    pub fn square(self) -> i64 {
        match self {
            PexType::NegTwoDivOne => -2,
            PexType::NegSixDivThree => -6,
        }
    }

    pub fn divisibility(self) -> i64 {
        match self {
            PexType::NegTwoDivOne => 1,
            PexType::NegSixDivThree => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PexType::NegTwoDivOne => "NegTwoDivOne",
            PexType::NegSixDivThree => "NegSixDivThree",
        }
    }

    pub fn from_invariants(square: &Int, div: &Int) -> Option<PexType> {
        PexType::ALL
            .into_iter()
            .find(|t| *square == int(t.square()) && *div == int(t.divisibility()))
    }

    /// Every pex type is also a wall type with the same invariants.
    pub fn as_wall(self) -> WallType {
        match self {
            PexType::NegTwoDivOne => WallType::NegTwoDivOne,
            PexType::NegSixDivThree => WallType::NegSixDivThree,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallError {
    NotPrimitive,
    NonNegativeSquare,
    ZeroVector,
    /// Classification needs divisibility in the OG10 lattice; the supplied
    /// lattice is neither OG10 nor equipped with an embedding into it.
    AmbientNotOg10,
    /// The reflection matrix has a non-integral entry (carried along).
    NotIntegral(Rat),
    ZeroSquare,
    NotOrthogonal,
    NotHalfIntegral,
    SigmaSquareNotMinusSix,
    Lattice(LatticeError),
}

impl fmt::Display for WallError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WallError::NotPrimitive => write!(f, "class is not primitive"),
            WallError::NonNegativeSquare => write!(f, "class has non-negative square"),
            WallError::ZeroVector => write!(f, "zero vector not allowed here"),
            WallError::AmbientNotOg10 => {
                write!(f, "divisibility context must be the OG10 lattice or embed into it")
            }
            WallError::NotIntegral(e) => write!(f, "reflection is not integral: entry {}", e),
            WallError::ZeroSquare => write!(f, "reflection needs a class of nonzero square"),
            WallError::NotOrthogonal => write!(f, "classes are not orthogonal"),
            WallError::NotHalfIntegral => write!(f, "half class is not integral"),
            WallError::SigmaSquareNotMinusSix => {
                write!(f, "exceptional class must have square -6")
            }
            WallError::Lattice(e) => write!(f, "{}", e),
        }
    }
}

impl From<LatticeError> for WallError {
    fn from(e: LatticeError) -> Self {
        WallError::Lattice(e)
    }
}

fn require_og10(l: &Lattice) -> Result<(), WallError> {
    if l.gram() == Lattice::og10().gram() {
        Ok(())
    } else {
        Err(WallError::AmbientNotOg10)
    }
}

fn negative_primitive_invariants(l: &Lattice, v: &Class) -> Result<(Int, Int), WallError> {
    require_og10(l)?;
    if v.is_zero() {
        return Err(WallError::ZeroVector);
    }
    if !v.is_primitive() {
        return Err(WallError::NotPrimitive);
    }
    let q = l.q(v);
    if !q.is_negative() {
        return Err(WallError::NonNegativeSquare);
    }
    let d = l.divisibility(v)?;
    Ok((q, d))
}

/// Wall-divisor test: matches (square, divisibility) against the four-case
/// table. `None` means the class is not a wall divisor.
pub fn wall_type(l: &Lattice, v: &Class) -> Result<Option<WallType>, WallError> {
    let (q, d) = negative_primitive_invariants(l, v)?;
    Ok(WallType::from_invariants(&q, &d))
}

/// Stably-prime-exceptional test against the two-case table.
pub fn stably_prime_exceptional(l: &Lattice, v: &Class) -> Result<Option<PexType>, WallError> {
    let (q, d) = negative_primitive_invariants(l, v)?;
    Ok(PexType::from_invariants(&q, &d))
}

/// Matrix of the reflection F -> F - 2 (D,F)/q(D) D in the ambient basis,
/// returned only when integral. Integrality holds exactly when q(D)
/// divides twice the divisibility of D.
pub fn reflection(l: &Lattice, d: &Class) -> Result<IntMatrix, WallError> {
    if d.len() != l.rank() {
        return Err(WallError::Lattice(LatticeError::DimensionMismatch));
    }
    let q = l.q(d);
    if q.is_zero() {
        return Err(WallError::ZeroSquare);
    }
    let gd = l.gram().mul_vec(d.coords());
    let n = l.rank();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // M[i][j] = delta_ij - 2 d_i (G d)_j / q
            let num = int(2) * &d.coords()[i] * &gd[j];
            let frac = Rat::new(num, q.clone());
            let diag = if i == j { Rat::from(int(1)) } else { Rat::zero() };
            let entry = diag - frac;
            if !entry.is_integer() {
                return Err(WallError::NotIntegral(entry));
            }
            entries.push(entry.to_integer());
        }
    }
    Ok(IntMatrix::new(n, n, entries))
}

/// Apply a reflection matrix (column-vector convention) to a class.
pub fn apply_matrix(m: &IntMatrix, v: &Class) -> Class {
    Class::new(m.mul_vec(v.coords()))
}

/// Split a divisibility-2 class orthogonal to sigma through the
/// half-integral overlattice: returns E = (d - sigma)/2 as an integral
/// class and checks the induced pairings.
pub fn half_integral_split(pic_m: &Lattice, d: &Class, sigma: &Class) -> Result<Class, WallError> {
    if !pic_m.pair(d, sigma).is_zero() {
        return Err(WallError::NotOrthogonal);
    }
    let diff = d.sub(sigma);
    if diff.coords().iter().any(|c| c.is_odd()) {
        return Err(WallError::NotHalfIntegral);
    }
    let e = Class::new(diff.coords().iter().map(|c| c / int(2)).collect());
    // Recombination is exact by construction: 2E + sigma = d.
    debug_assert_eq!(e.scaled(2).add(sigma), *d);
    Ok(e)
}

/// Projection of d to the sigma-orthogonal, with the admissibility verdict
/// of the contraction classification: the primitive class on the ray of
/// the projection must have (square, divisibility-in-sigma-perp) among
/// {(-2,1), (-2,2), (-4,1), (-10,2)}.
///
/// The divisibility is computed inside the sigma-orthogonal sublattice,
/// which is the lattice of the singular moduli space.
pub struct SigmaProjection {
    pub projection: RatVector,
    pub admissible: bool,
    /// (square, divisibility) of the primitive class on the projection ray,
    /// when the projection is nonzero.
    pub ray_invariants: Option<(Int, Int)>,
}

pub fn sigma_projection_class(
    pic_m: &Lattice,
    d: &Class,
    sigma: &Class,
) -> Result<SigmaProjection, WallError> {
    let qs = pic_m.q(sigma);
    if qs != int(-6) {
        return Err(WallError::SigmaSquareNotMinusSix);
    }
    let pairing = pic_m.pair(d, sigma);
    // proj = d - ((d,sigma)/q(sigma)) sigma
    let coeff = Rat::new(pairing, qs);
    let proj = RatVector::new(
        d.coords()
            .iter()
            .zip(sigma.coords())
            .map(|(a, b)| Rat::from(a.clone()) - &coeff * Rat::from(b.clone()))
            .collect(),
    );
    if proj.is_zero() {
        // d is proportional to sigma itself; nothing to test against the
        // singular-side table.
        return Ok(SigmaProjection {
            projection: proj,
            admissible: true,
            ray_invariants: None,
        });
    }
    let (prim, _) = proj.primitive_ray().expect("nonzero projection");
    let prim_class = Class::new(prim);
    let q = pic_m.q(&prim_class);
    // Divisibility inside sigma-perp.
    let sigma_sub = pic_m
        .sublattice(alloc::vec![sigma.clone()])
        .map_err(WallError::Lattice)?;
    let perp = pic_m.orthogonal_complement(&sigma_sub);
    let mut div = Int::zero();
    for i in 0..perp.rank() {
        div = div.gcd(&pic_m.pair(&prim_class, &perp.basis_class(i)));
    }
    let admissible = [(-2i64, 1i64), (-2, 2), (-4, 1), (-10, 2)]
        .iter()
        .any(|&(s, dv)| q == int(s) && div == int(dv));
    Ok(SigmaProjection {
        projection: proj,
        admissible,
        ray_invariants: Some((q, div)),
    })
}

/// Numerical lagrangian-fibration candidacy in a rank-2 cone context:
/// v must be primitive, isotropic, and lie on the closure of the movable
/// chamber selected by the context's ample-side hint.
pub fn lagrangian_candidate(
    ctx: &crate::cones::ConeContext,
    v: &(Int, Int),
) -> Result<bool, crate::cones::ConeError> {
    if v.0.is_zero() && v.1.is_zero() {
        return Ok(false);
    }
    if !v.0.gcd(&v.1).is_one() {
        return Ok(false);
    }
    let class = Class::new(alloc::vec![v.0.clone(), v.1.clone()]);
    if !ctx.pic().q(&class).is_zero() {
        return Ok(false);
    }
    let movable = crate::cones::movable_chamber(ctx, ctx.positive_ray_hint())?;
    Ok(movable.closed_selected_contains(v))
}
