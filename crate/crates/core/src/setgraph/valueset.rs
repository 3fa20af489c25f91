use std::collections::HashMap;
use std::ops::Index;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::BigRat;

/// A set of distinct rationals in increasing order, with a reverse index.
#[derive(Clone, Debug)]
pub struct ValueSet {
    values: Vec<BigRat>,
    index: HashMap<BigRat, usize>,
}

/// Result of [`ValueSet::build`]: the set and how many inputs were duplicates.
#[derive(Clone, Debug)]
pub struct BuiltSet {
    pub set: ValueSet,
    pub collisions: usize,
}

impl ValueSet {
    pub fn build(raw: Vec<BigRat>) -> Result<BuiltSet> {
        if raw.is_empty() {
            return Err(Error::Empty("value set"));
        }
        let total = raw.len();
        let mut values = raw;
        values.sort_unstable();
        values.dedup();
        let collisions = total - values.len();
        Ok(BuiltSet { set: Self::from_sorted_unique(values), collisions })
    }

    /// Build from values that must already be distinct; any duplicate is an error.
    pub fn from_distinct(raw: Vec<BigRat>) -> Result<ValueSet> {
        let built = Self::build(raw)?;
        if built.collisions > 0 {
            return Err(Error::Collision(format!("{} duplicate values", built.collisions)));
        }
        Ok(built.set)
    }

    fn from_sorted_unique(values: Vec<BigRat>) -> ValueSet {
        let index = values.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        ValueSet { values, index }
    }

    pub fn from_integers(xs: impl IntoIterator<Item = i64>) -> Result<ValueSet> {
        Ok(Self::build(xs.into_iter().map(BigRat::from_integer).collect())?.set)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigRat] {
        &self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRat> {
        self.values.iter()
    }

    pub fn index_of(&self, v: &BigRat) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &BigRat) -> bool {
        self.index.contains_key(v)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRat::zero())
    }

    /// Multiply every element by a nonzero factor.
    pub fn scale(&self, factor: &BigRat) -> Result<ValueSet> {
        if factor.is_zero() {
            return Err(Error::ZeroInput("scale_set"));
        }
        let mut values: Vec<BigRat> = self.values.iter().map(|v| v * factor).collect();
        if factor.is_negative() {
            values.reverse();
        }
        Ok(Self::from_sorted_unique(values))
    }

    /// Least common multiple of the reduced denominators.
    pub fn lcm_of_denominators(&self) -> BigUint {
        self.values.iter().fold(BigUint::one(), |acc, v| acc.lcm(&v.denom()))
    }
}

impl Index<usize> for ValueSet {
    type Output = BigRat;
    fn index(&self, i: usize) -> &BigRat {
        &self.values[i]
    }
}

impl PartialEq for ValueSet {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl Eq for ValueSet {}
