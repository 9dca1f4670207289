//! Second homology of the two rational ruled surfaces.
//!
//! Classes are integer pairs in a fixed basis: `(A, F)` for the product
//! `S²×S²` and `(L, E)` for the blow-up `CP²#-CP²`. Areas are exact
//! rationals so that admissibility (a strict inequality at integer
//! boundaries) is never decided by rounding.

use std::fmt;
use std::ops::Neg;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("classes live on different surfaces ({0} vs {1})")]
    SurfaceMismatch(RuledSurface, RuledSurface),
    #[error("lambda = {lambda} is out of range for the {surface} surface")]
    InvalidLambda {
        surface: RuledSurface,
        lambda: Rational64,
    },
    #[error("k = 0 is the open stratum, codimension 0")]
    OpenStratum,
    #[error("stratum index must be >= {min}, got {k}")]
    StratumIndex { k: i64, min: i64 },
    #[error("link of J_{m} in the closure of J_{k} needs m > k >= 0")]
    LinkIndices { m: i64, k: i64 },
    #[error("could not parse rational {0:?}")]
    ParseRational(String),
}

/// The two S²-bundles over S².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuledSurface {
    /// `S²×S²`, basis `(A, F)`.
    Trivial,
    /// `CP²#-CP²`, basis `(L, E)`.
    Nontrivial,
}

impl RuledSurface {
    pub fn basis_names(self) -> (&'static str, &'static str) {
        match self {
            RuledSurface::Trivial => ("A", "F"),
            RuledSurface::Nontrivial => ("L", "E"),
        }
    }

    /// Intersection matrix in the surface basis.
    pub fn pairing_matrix(self) -> [[i64; 2]; 2] {
        match self {
            RuledSurface::Trivial => [[0, 1], [1, 0]],
            RuledSurface::Nontrivial => [[1, 0], [0, -1]],
        }
    }

    /// First Chern class of the tangent bundle: `2A+2F` resp. `3L-E`.
    pub fn tangent_chern_class(self) -> H2Class {
        match self {
            RuledSurface::Trivial => H2Class::new(self, 2, 2),
            RuledSurface::Nontrivial => H2Class::new(self, 3, -1),
        }
    }

    /// The fiber class `F` (equal to `L-E` on the blow-up).
    pub fn fiber(self) -> H2Class {
        match self {
            RuledSurface::Trivial => H2Class::new(self, 0, 1),
            RuledSurface::Nontrivial => H2Class::new(self, 1, -1),
        }
    }

    /// Class whose representability defines the stratum `J_k`.
    ///
    /// On the product this is `A-kF` (k >= 0); on the blow-up it is
    /// `E-(k-1)F` (k >= 1).
    pub fn stratum_class(self, k: i64) -> Result<H2Class, HomologyError> {
        match self {
            RuledSurface::Trivial if k >= 0 => Ok(H2Class::new(self, 1, -k)),
            RuledSurface::Nontrivial if k >= 1 => {
                Ok(H2Class::new(self, 0, 1).sub_fibers(k - 1))
            }
            RuledSurface::Trivial => Err(HomologyError::StratumIndex { k, min: 0 }),
            RuledSurface::Nontrivial => Err(HomologyError::StratumIndex { k, min: 1 }),
        }
    }

    fn min_stratum(self) -> i64 {
        match self {
            RuledSurface::Trivial => 0,
            RuledSurface::Nontrivial => 1,
        }
    }
}

impl fmt::Display for RuledSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuledSurface::Trivial => f.write_str("trivial"),
            RuledSurface::Nontrivial => f.write_str("nontrivial"),
        }
    }
}

impl std::str::FromStr for RuledSurface {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(RuledSurface::Trivial),
            "nontrivial" => Ok(RuledSurface::Nontrivial),
            other => Err(format!("unknown surface {other:?} (expected trivial|nontrivial)")),
        }
    }
}

/// An integer homology class `a·X + b·Y` in the surface basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct H2Class {
    pub surface: RuledSurface,
    pub coeffs: [i64; 2],
}

impl H2Class {
    pub const fn new(surface: RuledSurface, a: i64, b: i64) -> Self {
        H2Class {
            surface,
            coeffs: [a, b],
        }
    }

    pub const fn zero(surface: RuledSurface) -> Self {
        H2Class::new(surface, 0, 0)
    }

    /// `A - kF` on the product.
    pub const fn section(k: i64) -> Self {
        H2Class::new(RuledSurface::Trivial, 1, -k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0, 0]
    }

    pub fn checked_add(self, other: H2Class) -> Result<H2Class, HomologyError> {
        self.same_surface(&other)?;
        Ok(H2Class::new(
            self.surface,
            self.coeffs[0] + other.coeffs[0],
            self.coeffs[1] + other.coeffs[1],
        ))
    }

    pub fn checked_sub(self, other: H2Class) -> Result<H2Class, HomologyError> {
        self.checked_add(-other)
    }

    pub fn scale(self, n: i64) -> H2Class {
        H2Class::new(self.surface, n * self.coeffs[0], n * self.coeffs[1])
    }

    /// `self - n·F`.
    pub fn sub_fibers(self, n: i64) -> H2Class {
        let f = self.surface.fiber();
        H2Class::new(
            self.surface,
            self.coeffs[0] - n * f.coeffs[0],
            self.coeffs[1] - n * f.coeffs[1],
        )
    }

    fn same_surface(&self, other: &H2Class) -> Result<(), HomologyError> {
        if self.surface == other.surface {
            Ok(())
        } else {
            Err(HomologyError::SurfaceMismatch(self.surface, other.surface))
        }
    }
}

impl Neg for H2Class {
    type Output = H2Class;

    fn neg(self) -> H2Class {
        H2Class::new(self.surface, -self.coeffs[0], -self.coeffs[1])
    }
}

impl fmt::Display for H2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.surface.basis_names();
        let [a, b] = self.coeffs;
        let term = |c: i64, name: &str| match c {
            1 => name.to_string(),
            -1 => format!("-{name}"),
            c => format!("{c}{name}"),
        };
        match (a, b) {
            (0, 0) => f.write_str("0"),
            (a, 0) => f.write_str(&term(a, x)),
            (0, b) => f.write_str(&term(b, y)),
            (a, b) if b < 0 => write!(f, "{}{}", term(a, x), term(b, y)),
            (a, b) => write!(f, "{}+{}", term(a, x), term(b, y)),
        }
    }
}

/// Symmetric bilinear intersection pairing.
pub fn intersect(c1: &H2Class, c2: &H2Class) -> Result<i64, HomologyError> {
    c1.same_surface(c2)?;
    let q = c1.surface.pairing_matrix();
    let (x, y) = (c1.coeffs, c2.coeffs);
    Ok((0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| x[i] * q[i][j] * y[j])
        .sum())
}

/// `c₁(TX)·c`.
pub fn chern_pairing(c: &H2Class) -> i64 {
    intersect(&c.surface.tangent_chern_class(), c).expect("same surface")
}

/// Expected codimension `2 - 2c₁(B)` of the structures admitting a sphere in class `B`.
pub fn adjunction_codim(c: &H2Class) -> i64 {
    -(2 * chern_pairing(c) - 2)
}

/// The symplectic form `ω^λ` on one of the two surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticForm {
    surface: RuledSurface,
    lambda: Rational64,
}

impl SymplecticForm {
    /// `λ >= 0` on the product, `λ > 0` on the blow-up.
    pub fn new(surface: RuledSurface, lambda: Rational64) -> Result<Self, HomologyError> {
        let ok = match surface {
            RuledSurface::Trivial => !lambda.is_negative(),
            RuledSurface::Nontrivial => lambda.is_positive(),
        };
        if ok {
            Ok(SymplecticForm { surface, lambda })
        } else {
            Err(HomologyError::InvalidLambda { surface, lambda })
        }
    }

    pub fn surface(&self) -> RuledSurface {
        self.surface
    }

    pub fn lambda(&self) -> Rational64 {
        self.lambda
    }

    /// Areas of the two basis classes.
    pub fn basis_areas(&self) -> [Rational64; 2] {
        let one = Rational64::from_integer(1);
        match self.surface {
            RuledSurface::Trivial => [one + self.lambda, one],
            RuledSurface::Nontrivial => [one + self.lambda, self.lambda],
        }
    }
}

pub fn area(form: &SymplecticForm, c: &H2Class) -> Result<Rational64, HomologyError> {
    if form.surface != c.surface {
        return Err(HomologyError::SurfaceMismatch(form.surface, c.surface));
    }
    let [x, y] = form.basis_areas();
    Ok(x * c.coeffs[0] + y * c.coeffs[1])
}

/// Indices `k` whose stratum class has positive area.
///
/// On the product the admissible set is `{k >= 0 : ω(A-kF) > 0}`; on the
/// blow-up it is `{k >= 1 : ω(E-(k-1)F) > 0}`. Area decreases strictly in
/// `k`, so the scan stops at the first non-positive value.
pub fn admissible_strata(form: &SymplecticForm) -> Vec<i64> {
    let surface = form.surface;
    (surface.min_stratum()..)
        .map_while(|k| {
            let class = surface.stratum_class(k).ok()?;
            let a = area(form, &class).ok()?;
            (a > Rational64::zero()).then_some(k)
        })
        .collect()
}

/// Codimension of a stratum together with the adjunction cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codimension {
    /// Value stated for the surface: `4k-2` (product) or `4k` (blow-up).
    pub stated: i64,
    /// `2 - 2c₁·B` for the stratum class `B`.
    pub adjunction: i64,
}

impl Codimension {
    pub fn consistent(&self) -> bool {
        self.stated == self.adjunction
    }
}

pub fn strata_codim(surface: RuledSurface, k: i64) -> Result<Codimension, HomologyError> {
    if k == 0 {
        return Err(HomologyError::OpenStratum);
    }
    if k < 0 {
        return Err(HomologyError::StratumIndex { k, min: 1 });
    }
    let class = surface.stratum_class(k)?;
    let stated = match surface {
        RuledSurface::Trivial => 4 * k - 2,
        RuledSurface::Nontrivial => 4 * k,
    };
    Ok(Codimension {
        stated,
        adjunction: adjunction_codim(&class),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDimension {
    pub dim: i64,
    /// Set for the pointed link (`k = 0`), where the value is the sphere
    /// dimension `4m-3` rather than the `4(m-k)-1` formula.
    pub inferred: bool,
}

pub fn link_dimension(m: i64, k: i64) -> Result<LinkDimension, HomologyError> {
    if k < 0 || m <= k {
        return Err(HomologyError::LinkIndices { m, k });
    }
    Ok(if k == 0 {
        LinkDimension {
            dim: 4 * m - 3,
            inferred: true,
        }
    } else {
        LinkDimension {
            dim: 4 * (m - k) - 1,
            inferred: false,
        }
    })
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational64, HomologyError> {
    let err = || HomologyError::ParseRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| err())?;
            let q: i64 = q.trim().parse().map_err(|_| err())?;
            if q == 0 {
                return Err(err());
            }
            Ok(Rational64::new(p, q))
        }
        None => s.parse::<i64>().map(Rational64::from_integer).map_err(|_| err()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn pairing_values() {
        let a1 = H2Class::section(1);
        let a2 = H2Class::section(2);
        assert_eq!(intersect(&a1, &a2).unwrap(), -3);
        let a = H2Class::section(0);
        assert_eq!(intersect(&a, &a).unwrap(), 0);

        let e = H2Class::new(RuledSurface::Nontrivial, 0, 1);
        let f = RuledSurface::Nontrivial.fiber();
        assert_eq!(intersect(&e, &e).unwrap(), -1);
        assert_eq!(intersect(&f, &f).unwrap(), 0);
        assert_eq!(intersect(&e, &f).unwrap(), 1);
    }

    #[test]
    fn mismatched_surfaces() {
        let a = H2Class::section(0);
        let e = H2Class::new(RuledSurface::Nontrivial, 0, 1);
        assert!(matches!(
            intersect(&a, &e),
            Err(HomologyError::SurfaceMismatch(..))
        ));
        assert!(a.checked_add(e).is_err());
    }

    #[test]
    fn areas() {
        let form = SymplecticForm::new(RuledSurface::Trivial, r(5, 2)).unwrap();
        assert_eq!(area(&form, &H2Class::section(2)).unwrap(), r(3, 2));
        assert_eq!(area(&form, &H2Class::section(3)).unwrap(), r(1, 2));
        let form0 = SymplecticForm::new(RuledSurface::Trivial, r(0, 1)).unwrap();
        assert_eq!(area(&form0, &H2Class::section(0)).unwrap(), r(1, 1));
        let blow = SymplecticForm::new(RuledSurface::Nontrivial, r(1, 1)).unwrap();
        let e = RuledSurface::Nontrivial.stratum_class(1).unwrap();
        assert_eq!(area(&blow, &e).unwrap(), r(1, 1));
        assert_eq!(area(&blow, &RuledSurface::Nontrivial.fiber()).unwrap(), r(1, 1));
    }

    #[test]
    fn lambda_ranges() {
        assert!(SymplecticForm::new(RuledSurface::Trivial, r(0, 1)).is_ok());
        assert!(SymplecticForm::new(RuledSurface::Trivial, r(-1, 3)).is_err());
        assert!(SymplecticForm::new(RuledSurface::Nontrivial, r(0, 1)).is_err());
    }

    #[test]
    fn admissible_examples() {
        let ks = |p, q| {
            admissible_strata(&SymplecticForm::new(RuledSurface::Trivial, r(p, q)).unwrap())
        };
        assert_eq!(ks(2, 1), vec![0, 1, 2]);
        assert_eq!(ks(0, 1), vec![0]);
        // 1 + 5/2 - k > 0  <=>  k <= 3
        assert_eq!(ks(5, 2), vec![0, 1, 2, 3]);
        assert_eq!(ks(7, 2), vec![0, 1, 2, 3, 4]);
        let blow = SymplecticForm::new(RuledSurface::Nontrivial, r(3, 2)).unwrap();
        // λ - (k-1) > 0  <=>  k <= 2
        assert_eq!(admissible_strata(&blow), vec![1, 2]);
    }

    #[test]
    fn chern_values() {
        for k in 0..10 {
            assert_eq!(chern_pairing(&H2Class::section(k)), 2 - 2 * k);
        }
        assert_eq!(chern_pairing(&RuledSurface::Nontrivial.fiber()), 2);
        assert_eq!(
            chern_pairing(&H2Class::new(RuledSurface::Nontrivial, 0, 1)),
            1
        );
    }

    #[test]
    fn codimensions() {
        assert_eq!(strata_codim(RuledSurface::Trivial, 2).unwrap().stated, 6);
        assert_eq!(strata_codim(RuledSurface::Trivial, 1).unwrap().stated, 2);
        assert_eq!(
            strata_codim(RuledSurface::Trivial, 0),
            Err(HomologyError::OpenStratum)
        );
        for k in 1..=20 {
            let c = strata_codim(RuledSurface::Trivial, k).unwrap();
            assert!(c.consistent());
            let n = strata_codim(RuledSurface::Nontrivial, k).unwrap();
            assert_eq!(n.stated, 4 * k);
            assert_eq!(n.adjunction, 4 * k - 4);
            assert!(!n.consistent());
        }
    }

    #[test]
    fn link_dimensions() {
        assert_eq!(link_dimension(2, 1).unwrap().dim, 3);
        assert_eq!(link_dimension(5, 4).unwrap().dim, 3);
        let pointed = link_dimension(2, 0).unwrap();
        assert_eq!(pointed.dim, 5);
        assert!(pointed.inferred);
        assert!(link_dimension(2, 2).is_err());
        assert!(link_dimension(1, 3).is_err());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(H2Class::section(2).to_string(), "A-2F");
        assert_eq!(RuledSurface::Nontrivial.fiber().to_string(), "L-E");
        assert_eq!(parse_rational("7/2").unwrap(), r(7, 2));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
