use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Exponent vector. Ordered graded lexicographically: total degree first,
/// then the first differing exponent decides (larger exponent is larger).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(alloc::vec![0; dim])
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = alloc::vec![0; dim];
        e[i] = 1;
        Monomial(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// All exponent vectors of dimension `dim` with total degree at most `max_deg`,
    /// in ascending graded lex order.
    pub fn all_up_to(dim: usize, max_deg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=max_deg {
            let mut layer = Vec::new();
            let mut cur = alloc::vec![0u32; dim];
            compositions(dim, d, 0, &mut cur, &mut layer);
            layer.sort();
            out.extend(layer);
        }
        out
    }
}

fn compositions(dim: usize, left: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if dim == 0 {
        if left == 0 {
            out.push(Monomial(cur.clone()));
        }
        return;
    }
    if i == dim - 1 {
        cur[i] = left;
        out.push(Monomial(cur.clone()));
        cur[i] = 0;
        return;
    }
    for e in 0..=left {
        cur[i] = e;
        compositions(dim, left - e, i + 1, cur, out);
    }
    cur[i] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_power_product(f, "x", &self.0, true)
    }
}

/// Writes `v1^e1*v2^e2...`, or `1` when everything vanishes and `one_if_empty` is set.
pub(crate) fn write_power_product(
    f: &mut fmt::Formatter<'_>,
    letter: &str,
    exps: &[u32],
    one_if_empty: bool,
) -> fmt::Result {
    let mut first = true;
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{}{}", letter, i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    if first && one_if_empty {
        f.write_str("1")?;
    }
    Ok(())
}
