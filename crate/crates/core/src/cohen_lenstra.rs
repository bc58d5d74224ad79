//! The Cohen–Lenstra measure `ν(A) = |Aut A|^{-1} ∏_{i≥1} (1 - ℓ^{-i})` and
//! moments `Σ_B |Surj(B, A)| ξ(B)` of measures on group classes.
//!
//! The infinite product and the infinite sum over classes are both
//! truncated; the truncation parameters travel with every result. Weights
//! are binary floating point with an explicit precision.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::UBig;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counting::{aut_count, surj_count};
use crate::error::{Error, Result};
use crate::poset::{classes_up_to, Ell, GroupClass};

/// Binary floating point with round-half-to-even.
pub type Real = FBig<HalfEven, 2>;

pub const DEFAULT_PRECISION: usize = 128;
pub const DEFAULT_PRODUCT_TERMS: u32 = 64;

fn to_real(n: &BigUint, precision: usize) -> Real {
    Real::from(UBig::from_le_bytes(&n.to_bytes_le())).with_precision(precision).value()
}

fn ratio(num: &BigUint, den: &BigUint, precision: usize) -> Real {
    to_real(num, precision) / to_real(den, precision)
}

/// Digits after the decimal point that `precision` bits can resolve.
pub fn decimal_digits(precision: usize) -> usize {
    (precision as f64 * std::f64::consts::LOG10_2).ceil() as usize
}

/// Fixed-point decimal rendering with `digits` fractional digits.
pub fn to_decimal(x: &Real, digits: usize) -> String {
    let decimal = x.clone().with_base_and_precision::<10>(digits + 4).value();
    format!("{decimal:.digits$}")
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

fn check_precision(precision: usize) -> Result<()> {
    if precision < 8 {
        return Err(Error::Precondition(format!("precision must be at least 8 bits, got {precision}")));
    }
    Ok(())
}

/// `∏_{i=1}^{terms} (1 - ℓ^{-i})`, each factor rounded to `precision` bits.
pub fn euler_product(ell: Ell, terms: u32, precision: usize) -> Result<Real> {
    if terms < 1 {
        return Err(Error::Precondition("the Euler product needs at least one factor".into()));
    }
    check_precision(precision)?;
    let mut acc = Real::ONE.with_precision(precision).value();
    for i in 1..=terms {
        let den = ell.pow(i);
        let num = &den - 1u32;
        acc *= ratio(&num, &den, precision);
    }
    Ok(acc)
}

/// `ν(A)` under a truncated Euler product, with a lower bound covering the
/// omitted factors.
#[derive(Debug, Clone, PartialEq)]
pub struct NuValue {
    pub value: Real,
    /// The untruncated `ν(A)` lies in `[lower_bound, value]`:
    /// `∏_{i>N} (1 - ℓ^{-i}) ≥ 1 - ℓ^{-N}/(ℓ-1)`.
    pub lower_bound: Real,
    pub product_terms: u32,
    pub precision: usize,
}

pub fn nu(a: &GroupClass, product_terms: u32, precision: usize) -> Result<NuValue> {
    let product = euler_product(a.ell(), product_terms, precision)?;
    let value = product / to_real(&aut_count(a), precision);
    let ell = a.ell();
    let tail = ratio(&BigUint::from(1u8), &(ell.pow(product_terms) * (ell.get() - 1)), precision);
    let lower_bound = &value * (Real::ONE.with_precision(precision).value() - tail);
    Ok(NuValue { value, lower_bound, product_terms, precision })
}

/// Every class with `|A| ≤ ℓ^max_order_exponent`.
pub fn enumerate_classes(ell: Ell, max_order_exponent: u32) -> Vec<GroupClass> {
    classes_up_to(ell, max_order_exponent)
}

/// A finitely supported measure on group classes.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMeasure {
    ell: Ell,
    order_bound_exponent: u32,
    product_terms: Option<u32>,
    precision: usize,
    weights: Vec<(GroupClass, Real)>,
}

impl TruncatedMeasure {
    /// `ν` restricted to classes with `|A| ≤ ℓ^M`, using `N` Euler factors.
    pub fn cohen_lenstra(ell: Ell, max_order_exponent: u32, product_terms: u32, precision: usize) -> Result<Self> {
        let product = euler_product(ell, product_terms, precision)?;
        let weights = enumerate_classes(ell, max_order_exponent)
            .into_iter()
            .map(|a| {
                let w = &product / to_real(&aut_count(&a), precision);
                (a, w)
            })
            .collect();
        Ok(TruncatedMeasure {
            ell,
            order_bound_exponent: max_order_exponent,
            product_terms: Some(product_terms),
            precision,
            weights,
        })
    }

    /// An arbitrary measure with the given nonnegative weights.
    pub fn from_weights(
        ell: Ell,
        weights: impl IntoIterator<Item = (GroupClass, Real)>,
        precision: usize,
    ) -> Result<Self> {
        check_precision(precision)?;
        let mut weights: Vec<(GroupClass, Real)> =
            weights.into_iter().map(|(a, w)| (a, w.with_precision(precision).value())).collect();
        for (a, w) in &weights {
            if a.ell() != ell {
                return Err(Error::PrimeMismatch { left: ell.get(), right: a.ell().get() });
            }
            if *w < Real::ZERO {
                return Err(Error::Precondition(format!("negative weight on {a}")));
            }
        }
        weights.sort_by(|x, y| x.0.cmp(&y.0));
        if weights.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Precondition("duplicate class in measure support".into()));
        }
        let order_bound_exponent = weights.iter().map(|(a, _)| a.size()).max().unwrap_or(0);
        Ok(TruncatedMeasure { ell, order_bound_exponent, product_terms: None, precision, weights })
    }

    /// Unit mass at `b`.
    pub fn point_mass(b: &GroupClass, precision: usize) -> Result<Self> {
        Self::from_weights(b.ell(), [(b.clone(), Real::ONE)], precision)
    }

    pub fn ell(&self) -> Ell {
        self.ell
    }

    pub fn order_bound_exponent(&self) -> u32 {
        self.order_bound_exponent
    }

    pub fn product_terms(&self) -> Option<u32> {
        self.product_terms
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Support in enumeration order.
    pub fn weights(&self) -> &[(GroupClass, Real)] {
        &self.weights
    }

    pub fn weight(&self, a: &GroupClass) -> Option<&Real> {
        self.weights.binary_search_by(|(b, _)| b.cmp(a)).ok().map(|i| &self.weights[i].1)
    }

    /// Sum of all weights, accumulated in support order.
    pub fn total_mass(&self) -> Real {
        self.weights.iter().fold(Real::ZERO.with_precision(self.precision).value(), |acc, (_, w)| acc + w)
    }

    /// The partial `A`-th moment `Σ_{B in support} |Surj(B, A)| · weight(B)`.
    pub fn moment(&self, a: &GroupClass) -> Result<Moment> {
        if a.ell() != self.ell {
            return Err(Error::PrimeMismatch { left: self.ell.get(), right: a.ell().get() });
        }
        let mut acc = Real::ZERO.with_precision(self.precision).value();
        for (b, w) in &self.weights {
            let surj = surj_count(b, a)?;
            if surj.is_one() {
                acc += w;
            } else if !surj.is_zero() {
                acc += w * to_real(&surj, self.precision);
            }
        }
        Ok(Moment { a: a.clone(), value: acc, support_bound: self.order_bound_exponent })
    }

    pub fn dump(&self) -> MeasureDump {
        let digits = decimal_digits(self.precision);
        MeasureDump {
            ell: self.ell.get(),
            max_order_exponent: self.order_bound_exponent,
            product_terms: self.product_terms,
            precision: self.precision,
            weights: self.weights.iter().map(|(a, w)| (a.to_string(), to_decimal(w, digits))).collect(),
            total_mass: to_decimal(&self.total_mass(), digits),
        }
    }
}

/// A moment computed over a truncated support; `support_bound` is the
/// `M` in `|B| ≤ ℓ^M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Moment {
    pub a: GroupClass,
    pub value: Real,
    pub support_bound: u32,
}

#[derive(Debug, Clone, Serialize, serde::Deserialize, PartialEq)]
pub struct MeasureDump {
    pub ell: u32,
    #[serde(rename = "M")]
    pub max_order_exponent: u32,
    #[serde(rename = "N")]
    pub product_terms: Option<u32>,
    pub precision: usize,
    pub weights: Vec<(String, String)>,
    pub total_mass: String,
}
