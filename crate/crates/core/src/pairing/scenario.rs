use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PairingError;
use crate::order::{CodedOrder, Cut, QuadRat};

/// Expansion of every class point into `window` elements `(class, 0..window)`,
/// ordered lexicographically. Stands for a ℤ-copy of each class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberView {
    pub window: usize,
}

/// The class order of one side. Serializes as the underlying [`CodedOrder`]
/// with an optional `member_view` field alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassOrder {
    #[serde(flatten)]
    pub points: CodedOrder,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member_view: Option<MemberView>,
}

impl ClassOrder {
    pub fn new(points: CodedOrder) -> Self {
        Self { points, member_view: None }
    }

    pub fn with_window(points: CodedOrder, window: usize) -> Self {
        Self { points, member_view: Some(MemberView { window }) }
    }

    pub fn member(&self, x: &QuadRat) -> bool {
        self.points.member(x)
    }
}

/// `x ↦ scale·x + shift` with a nonzero rational scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(with = "rational_pair")]
    pub scale: BigRational,
    pub shift: QuadRat,
}

impl AffineMap {
    pub fn new(scale: BigRational, shift: QuadRat) -> Self {
        Self { scale, shift }
    }

    pub fn identity() -> Self {
        Self::new(BigRational::from_integer(1.into()), QuadRat::zero())
    }

    /// `x ↦ c − x`.
    pub fn reflection(c: QuadRat) -> Self {
        Self::new(BigRational::from_integer((-1).into()), c)
    }

    pub fn apply(&self, x: &QuadRat) -> QuadRat {
        x.scale(&self.scale) + &self.shift
    }

    pub fn invert(&self, y: &QuadRat) -> QuadRat {
        (y - &self.shift).scale(&self.scale.recip())
    }

    pub fn increasing(&self) -> bool {
        self.scale.is_positive()
    }
}

mod rational_pair {
    use super::*;
    use serde::de::Error as _;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        [r.numer().to_string(), r.denom().to_string()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let [n, m] = <[String; 2]>::deserialize(d)?;
        let n: BigInt = n.parse().map_err(D::Error::custom)?;
        let m: BigInt = m.parse().map_err(D::Error::custom)?;
        if m.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedLink {
    Pairs(Vec<(QuadRat, QuadRat)>),
    Rule(AffineMap),
}

/// The image of one class under an explicitly tabulated link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "image", rename_all = "snake_case")]
pub enum LinkImage {
    Class { point: QuadRat },
    Cut { cut: Cut },
    /// An arbitrary finite set of opposite classes (for adversarial tests).
    Set { points: Vec<QuadRat> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LinkRepr", into = "LinkRepr")]
pub enum Link {
    /// A bijection between class points.
    Bounded(BoundedLink),
    /// `F(a) = { y | y < rule(a) }` in the opposite order.
    Unbounded(AffineMap),
    /// A finite table of images, which may mix kinds.
    Explicit(Vec<(QuadRat, LinkImage)>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum LinkRepr {
    Bounded {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pairs: Option<Vec<(QuadRat, QuadRat)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rule: Option<AffineMap>,
    },
    Unbounded {
        cut_rule: AffineMap,
    },
    Explicit {
        entries: Vec<(QuadRat, LinkImage)>,
    },
}

impl TryFrom<LinkRepr> for Link {
    type Error = PairingError;

    fn try_from(r: LinkRepr) -> Result<Self, Self::Error> {
        let nonzero = |m: &AffineMap| {
            if m.scale.is_zero() {
                Err(PairingError::Invalid("affine rule with zero scale".into()))
            } else {
                Ok(())
            }
        };
        match r {
            LinkRepr::Bounded { pairs: Some(p), rule: None } => Ok(Link::Bounded(BoundedLink::Pairs(p))),
            LinkRepr::Bounded { pairs: None, rule: Some(m) } => {
                nonzero(&m)?;
                Ok(Link::Bounded(BoundedLink::Rule(m)))
            }
            LinkRepr::Bounded { .. } => Err(PairingError::Invalid("bounded link needs exactly one of pairs or rule".into())),
            LinkRepr::Unbounded { cut_rule } => {
                nonzero(&cut_rule)?;
                Ok(Link::Unbounded(cut_rule))
            }
            LinkRepr::Explicit { entries } => Ok(Link::Explicit(entries)),
        }
    }
}

impl From<Link> for LinkRepr {
    fn from(l: Link) -> Self {
        match l {
            Link::Bounded(BoundedLink::Pairs(p)) => LinkRepr::Bounded { pairs: Some(p), rule: None },
            Link::Bounded(BoundedLink::Rule(m)) => LinkRepr::Bounded { pairs: None, rule: Some(m) },
            Link::Unbounded(m) => LinkRepr::Unbounded { cut_rule: m },
            Link::Explicit(entries) => LinkRepr::Explicit { entries },
        }
    }
}

/// A sub-selection of either side; a missing side keeps the whole order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<CodedOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<CodedOrder>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub lin_p: ClassOrder,
    pub lin_q: ClassOrder,
    pub link: Link,
    pub declared_commute: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
}

impl Scenario {
    pub fn new(lin_p: ClassOrder, lin_q: ClassOrder, link: Link, declared_commute: bool) -> Self {
        Self { lin_p, lin_q, link, declared_commute, model: None }
    }

    pub fn with_model(mut self, model: Model) -> Self {
        self.model = Some(model);
        self
    }

    /// Image of a class point of `lin_p`, which must be a member.
    pub fn image(&self, a: &QuadRat) -> Result<LinkImage, PairingError> {
        if !self.lin_p.member(a) {
            return Err(PairingError::PointNotInOrder(a.clone()));
        }
        self.raw_image(a)
    }

    pub(crate) fn raw_image(&self, a: &QuadRat) -> Result<LinkImage, PairingError> {
        match &self.link {
            Link::Bounded(BoundedLink::Rule(m)) => Ok(LinkImage::Class { point: m.apply(a) }),
            Link::Bounded(BoundedLink::Pairs(p)) => p
                .iter()
                .find(|(x, _)| x == a)
                .map(|(_, y)| LinkImage::Class { point: y.clone() })
                .ok_or_else(|| PairingError::PointNotInOrder(a.clone())),
            Link::Unbounded(m) => Ok(LinkImage::Cut { cut: Cut::below(m.apply(a)) }),
            Link::Explicit(entries) => entries
                .iter()
                .find(|(x, _)| x == a)
                .map(|(_, img)| img.clone())
                .ok_or_else(|| PairingError::PointNotInOrder(a.clone())),
        }
    }

    /// `G = F⁻¹` for bounded links.
    pub fn inverse(&self, b: &QuadRat) -> Result<QuadRat, PairingError> {
        match &self.link {
            Link::Bounded(BoundedLink::Rule(m)) => Ok(m.invert(b)),
            Link::Bounded(BoundedLink::Pairs(p)) => p
                .iter()
                .find(|(_, y)| y == b)
                .map(|(x, _)| x.clone())
                .ok_or_else(|| PairingError::PointNotInOrder(b.clone())),
            Link::Explicit(entries) => entries
                .iter()
                .find(|(_, img)| matches!(img, LinkImage::Class { point } if point == b))
                .map(|(x, _)| x.clone())
                .ok_or_else(|| PairingError::PointNotInOrder(b.clone())),
            Link::Unbounded(_) => Err(PairingError::Unsupported("unbounded links have no class inverse".into())),
        }
    }

    /// Structural checks that do not need sampling.
    pub fn validate(&self) -> Result<(), PairingError> {
        for side in [&self.lin_p, &self.lin_q] {
            if side.member_view.is_some_and(|v| v.window == 0) {
                return Err(PairingError::Invalid("member_view window must be positive".into()));
            }
        }
        let table: Option<Vec<&QuadRat>> = match &self.link {
            Link::Bounded(BoundedLink::Pairs(p)) => Some(p.iter().map(|(x, _)| x).collect()),
            Link::Explicit(e) => Some(e.iter().map(|(x, _)| x).collect()),
            _ => None,
        };
        if let Some(domain) = table {
            let mut seen = HashMap::new();
            for x in domain {
                if seen.insert(x, ()).is_some() {
                    return Err(PairingError::Invalid(format!("class {x} listed twice in the link")));
                }
            }
            if !self.lin_p.points.is_finite() {
                return Err(PairingError::Invalid("a tabulated link needs a finite p side".into()));
            }
        }
        Ok(())
    }
}
