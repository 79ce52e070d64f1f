//! Group rings `RG` with `R` one of Z, Q, GF(p).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nilgroup::{GroupElement, PcPresentation};
use crate::scalar::{Field, Scalar};

use super::module::FDModule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarRing {
    Integers,
    Field(Field),
}

impl ScalarRing {
    /// The field that holds the coefficients (Q for Z).
    pub fn field(&self) -> Field {
        match self {
            ScalarRing::Integers => Field::Rationals,
            ScalarRing::Field(f) => *f,
        }
    }

    pub fn parse(s: &str) -> Result<ScalarRing> {
        let s = s.trim();
        match s {
            "Z" => Ok(ScalarRing::Integers),
            "Q" => Ok(ScalarRing::Field(Field::Rationals)),
            _ => {
                let p = s
                    .strip_prefix("GF(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|r| r.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown scalar ring {s}")))?;
                Ok(ScalarRing::Field(Field::prime(p)?))
            }
        }
    }

    pub fn contains(&self, c: &Scalar) -> bool {
        match self {
            ScalarRing::Integers => c.as_rational().is_some_and(|q| q.is_integer()),
            ScalarRing::Field(f) => c.field() == *f,
        }
    }
}

impl fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarRing::Integers => write!(f, "Z"),
            ScalarRing::Field(Field::Rationals) => write!(f, "Q"),
            ScalarRing::Field(Field::Prime(p)) => write!(f, "GF({p})"),
        }
    }
}

/// Reads a coefficient in `f`: rationals reduce mod p, residues stay put.
pub fn coerce(c: &Scalar, f: Field) -> Result<Scalar> {
    match (c, f) {
        (Scalar::Rat(q), Field::Prime(_)) => {
            f.from_rational(q).ok_or_else(|| Error::InvalidInput("denominator divisible by p".into()))
        }
        (Scalar::Mod { v, p }, Field::Prime(q)) if *p == q => Ok(f.from_i64(*v as i64)),
        (Scalar::Rat(_), Field::Rationals) => Ok(c.clone()),
        _ => Err(Error::InvalidInput(format!("cannot read {c} in {f}"))),
    }
}

/// Finitely supported `R`-combination of group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElem {
    pub group: Arc<PcPresentation>,
    pub ring: ScalarRing,
    pub terms: BTreeMap<GroupElement, Scalar>,
}

impl GroupRingElem {
    pub fn zero(group: Arc<PcPresentation>, ring: ScalarRing) -> GroupRingElem {
        GroupRingElem { group, ring, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        group: Arc<PcPresentation>,
        ring: ScalarRing,
        terms: impl IntoIterator<Item = (GroupElement, Scalar)>,
    ) -> GroupRingElem {
        let mut out = GroupRingElem::zero(group, ring);
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    pub fn element(group: Arc<PcPresentation>, ring: ScalarRing, g: GroupElement) -> GroupRingElem {
        let one = ring.field().one();
        GroupRingElem::from_terms(group, ring, [(g, one)])
    }

    pub fn one(group: Arc<PcPresentation>, ring: ScalarRing) -> GroupRingElem {
        let id = group.identity();
        GroupRingElem::element(group, ring, id)
    }

    /// `g - 1`.
    pub fn minus_one(group: Arc<PcPresentation>, ring: ScalarRing, g: GroupElement) -> GroupRingElem {
        let f = ring.field();
        let id = group.identity();
        GroupRingElem::from_terms(group, ring, [(g, f.one()), (id, -f.one())])
    }

    fn add_term(&mut self, g: GroupElement, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&g) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&g);
        } else {
            self.terms.insert(g, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &GroupRingElem) -> GroupRingElem {
        let mut out = self.clone();
        for (g, c) in &o.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> GroupRingElem {
        GroupRingElem::from_terms(
            self.group.clone(),
            self.ring,
            self.terms.iter().map(|(g, c)| (g.clone(), c * k)),
        )
    }

    pub fn sub(&self, o: &GroupRingElem) -> GroupRingElem {
        self.add(&o.scale(&(-o.ring.field().one())))
    }

    pub fn mul(&self, o: &GroupRingElem) -> GroupRingElem {
        let g = &self.group;
        let mut out = GroupRingElem::zero(g.clone(), self.ring);
        for (x, a) in &self.terms {
            for (y, b) in &o.terms {
                out.add_term(g.mul(x, y), a * b);
            }
        }
        out
    }

    /// `y^{-1} self y`.
    pub fn conjugate(&self, y: &[i64]) -> GroupRingElem {
        let g = &self.group;
        GroupRingElem::from_terms(
            g.clone(),
            self.ring,
            self.terms.iter().map(|(x, c)| (g.conjugate(x, y), c.clone())),
        )
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> Scalar {
        self.terms.values().fold(self.ring.field().zero(), |acc, c| &acc + c)
    }

    /// Least common denominator of the coefficients (1 over GF(p)).
    pub fn denominator(&self) -> i64 {
        let mut d = num_bigint::BigInt::from(1);
        for c in self.terms.values() {
            if let Some(q) = c.as_rational() {
                d = num_integer::lcm(d, q.denom().abs());
            }
        }
        i64::try_from(d).expect("denominator fits in i64")
    }

    /// Same coefficients read in another scalar ring (integers reduced mod p).
    pub fn change_ring(&self, ring: ScalarRing) -> Result<GroupRingElem> {
        let f = ring.field();
        let terms = self.terms.iter().map(|(g, c)| Ok((g.clone(), coerce(c, f)?))).collect::<Result<Vec<_>>>()?;
        Ok(GroupRingElem::from_terms(self.group.clone(), ring, terms))
    }

    /// Matrix of the element acting on a module over a subgroup containing its support.
    pub fn action_on(&self, m: &FDModule) -> Result<Matrix> {
        let mut acc = Matrix::zeros(m.field, m.dim, m.dim);
        for (g, c) in &self.terms {
            let c = coerce(c, m.field)?;
            acc = acc.add(&m.matrix_of(g)?.scale(&c));
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_rendered();
            let abs = if neg { (-c).render() } else { c.render() };
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let word = self.group.render(g);
            let body = match (abs.as_str(), word.as_str()) {
                (a, "1") => a.to_string(),
                ("1", w) => w.to_string(),
                (a, w) => format!("{a}*{w}"),
            };
            out.push_str(sep);
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
