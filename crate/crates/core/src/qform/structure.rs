use std::collections::HashMap;

use super::classnum::class_number;
use super::form::{compose, form_pow, identity_for, identity_form, prime_form, QuadForm};
use super::{Discriminant, EngineBounds};
use crate::arith::{factor_u64, isqrt_u128, primes_up_to, FactorBudget};
use crate::error::{Error, Result};

/// Largest intermediate subgroup kept as an explicit element table.
const SYLOW_TABLE_CAP: u64 = 1 << 22;

/// Class number and invariant-factor decomposition `C(d_1) x ... x C(d_t)`
/// with `d_1 | d_2 | ... | d_t`, each `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupStructure {
    pub discriminant: Discriminant,
    pub class_number: u64,
    pub elementary_divisors: Vec<u64>,
    /// `generators[i]` has order `elementary_divisors[i]`.
    pub generators: Vec<QuadForm>,
}

impl ClassGroupStructure {
    /// Largest invariant factor (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.elementary_divisors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors.len()
    }
}

/// Order of `f` given the class number `h` of its discriminant: descend from
/// `h` through its prime divisors.
pub fn element_order_with_class_number(f: &QuadForm, h: u64) -> u64 {
    let id = identity_for(f);
    let mut order = h;
    let factors = factor_u64(h, &FactorBudget::default()).expect("class numbers factor quickly");
    for (p, _) in factors {
        while order.is_multiple_of(p) && form_pow(f, order / p) == id {
            order /= p;
        }
    }
    debug_assert_eq!(form_pow(f, order), id);
    order
}

/// Least `e >= 1` with `f^e` principal.
pub fn element_order(f: &QuadForm, bounds: &EngineBounds) -> Result<u64> {
    let disc = Discriminant::new(f.discriminant())?;
    let h = class_number(&disc, bounds)?;
    Ok(element_order_with_class_number(f, h))
}

/// Integer Smith normal form of a square matrix. Returns the diagonal and the
/// inverse of the accumulated column transform.
#[allow(clippy::needless_range_loop)]
fn smith_normal_form(mut m: Vec<Vec<i128>>) -> (Vec<i128>, Vec<Vec<i128>>) {
    let n = m.len();
    let mut vinv: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    for t in 0..n {
        loop {
            let Some((pi, pj)) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs())
            else {
                return (m.iter().enumerate().map(|(i, r)| r[i]).collect(), vinv);
            };
            m.swap(t, pi);
            if pj != t {
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                vinv.swap(t, pj);
            }
            let pivot = m[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = m[i][t] / pivot;
                if q != 0 {
                    for j in t..n {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..n {
                let q = m[t][j] / pivot;
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    // column j -= q * column t  =>  row t of V^-1 += q * row j
                    for k in 0..n {
                        vinv[t][k] += q * vinv[j][k];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..n).find(|&i| (t + 1..n).any(|j| m[i][j] % pivot != 0));
            match bad_row {
                Some(i) => {
                    for j in t..n {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in t..n {
                m[t][j] = -m[t][j];
            }
        }
    }
    (m.iter().enumerate().map(|(i, r)| r[i]).collect(), vinv)
}

/// Cyclic factors `(order, generator)` of the Sylow `ell`-subgroup, largest first.
fn sylow_subgroup(
    disc: &Discriminant,
    h: u64,
    ell: u64,
    exponent: u32,
) -> Result<Vec<(u64, QuadForm)>> {
    let target = ell.pow(exponent);
    let cofactor = h / target;
    let id = identity_form(disc);

    let mut gens: Vec<QuadForm> = Vec::new();
    let mut rel_orders: Vec<u64> = Vec::new();
    let mut relations: Vec<Vec<i128>> = Vec::new();
    let mut elements: Vec<QuadForm> = vec![id];
    let mut index: HashMap<QuadForm, u64> = HashMap::from([(id, 0)]);
    let mut size = 1u64;

    let decode = |mut idx: u64, rel_orders: &[u64]| -> Vec<i128> {
        rel_orders
            .iter()
            .map(|&n| {
                let e = idx % n;
                idx /= n;
                e as i128
            })
            .collect()
    };

    // Prime forms of norm up to sqrt(|D|/3) generate for fundamental D; for
    // orders, classes meeting the conductor need larger primes.
    let minkowski = isqrt_u128(disc.abs() / 3) as u64 + 2;
    let give_up = minkowski.max(4 * disc.abs().min(u64::MAX as u128 / 8) as u64);
    let mut searched = 1u64;
    let mut limit = 64u64;
    let candidates = std::iter::from_fn(|| {
        if searched >= give_up {
            return None;
        }
        let chunk: Vec<u64> = primes_up_to(limit).into_iter().filter(|&q| q > searched).collect();
        searched = limit;
        limit = limit.saturating_mul(4);
        Some(chunk)
    })
    .flatten();
    for q in candidates {
        if size == target {
            break;
        }
        let Some(f) = prime_form(disc, q) else { continue };
        let x = form_pow(&f, cofactor);
        let mut y = x;
        let mut rel = 1u64;
        let found = loop {
            if let Some(&i) = index.get(&y) {
                break i;
            }
            y = form_pow(&y, ell);
            rel *= ell;
        };
        if rel == 1 {
            continue;
        }
        let mut row = vec![0i128; gens.len() + 1];
        for (k, e) in decode(found, &rel_orders).into_iter().enumerate() {
            row[k] = -e;
        }
        row[gens.len()] = rel as i128;
        for r in relations.iter_mut() {
            r.push(0);
        }
        relations.push(row);
        gens.push(x);
        rel_orders.push(rel);
        let new_size = size * rel;
        if new_size < target {
            if new_size > SYLOW_TABLE_CAP {
                return Err(Error::BoundExceeded {
                    what: "Sylow subgroup table",
                    value: new_size.to_string(),
                    bound: SYLOW_TABLE_CAP.to_string(),
                });
            }
            let mut power = x;
            for t in 1..rel {
                for k in 0..size as usize {
                    let z = compose(&power, &elements[k]);
                    index.insert(z, t * size + k as u64);
                    elements.push(z);
                }
                power = compose(&power, &x);
            }
        }
        size = new_size;
    }
    if size != target {
        return Err(Error::InvalidInput(format!(
            "prime forms generate a {ell}-subgroup of order {size}, expected {target}"
        )));
    }

    let (diag, vinv) = smith_normal_form(relations);
    let mut out: Vec<(u64, QuadForm)> = diag
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1)
        .map(|(k, &d)| {
            let g = vinv[k].iter().zip(&gens).fold(id, |acc, (&coef, gen)| {
                let e = coef.rem_euclid(target as i128) as u64;
                compose(&acc, &form_pow(gen, e))
            });
            (d as u64, g)
        })
        .collect();
    out.sort_by_key(|e| std::cmp::Reverse(e.0));
    Ok(out)
}

/// Invariant factors and generators of the form class group of `D`.
pub fn class_group_structure(disc: &Discriminant, bounds: &EngineBounds) -> Result<ClassGroupStructure> {
    let h = class_number(disc, bounds)?;
    if h > bounds.struct_bound {
        return Err(Error::BoundExceeded {
            what: "class number",
            value: h.to_string(),
            bound: bounds.struct_bound.to_string(),
        });
    }
    let id = identity_form(disc);
    let sylows: Vec<Vec<(u64, QuadForm)>> = factor_u64(h, &bounds.budget)?
        .into_iter()
        .map(|(ell, e)| sylow_subgroup(disc, h, ell, e))
        .collect::<Result<_>>()?;
    let rank = sylows.iter().map(Vec::len).max().unwrap_or(0);
    let mut divisors = Vec::with_capacity(rank);
    let mut generators = Vec::with_capacity(rank);
    // i-th largest invariant factor = product of the i-th largest Sylow factors.
    for i in 0..rank {
        let (d, g) = sylows
            .iter()
            .filter_map(|s| s.get(i))
            .fold((1u64, id), |(d, g), (n, x)| (d * n, compose(&g, x)));
        divisors.push(d);
        generators.push(g);
    }
    divisors.reverse();
    generators.reverse();
    debug_assert_eq!(divisors.iter().product::<u64>(), h);
    Ok(ClassGroupStructure {
        discriminant: *disc,
        class_number: h,
        elementary_divisors: divisors,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::super::classnum::reduced_forms;
    use super::*;

    fn disc(d: i128) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    /// Order by iterating compositions one at a time.
    fn naive_order(f: &QuadForm, id: &QuadForm) -> u64 {
        let mut y = *f;
        let mut k = 1;
        while y != *id {
            y = compose(&y, f);
            k += 1;
        }
        k
    }

    #[test]
    fn structure_examples() {
        let b = EngineBounds::default();
        let s = class_group_structure(&disc(-23), &b).unwrap();
        assert_eq!(s.elementary_divisors, vec![3]);
        assert_eq!(element_order(&s.generators[0], &b).unwrap(), 3);
        let s = class_group_structure(&disc(-3), &b).unwrap();
        assert!(s.elementary_divisors.is_empty());
        assert_eq!(s.class_number, 1);
        let s = class_group_structure(&disc(-212), &b).unwrap();
        assert_eq!(s.exponent() % 3, 0);
    }

    #[test]
    fn element_order_examples() {
        let b = EngineBounds::default();
        assert_eq!(element_order(&identity_form(&disc(-23)), &b).unwrap(), 1);
        assert_eq!(element_order(&QuadForm::new(2, 1, 3).unwrap(), &b).unwrap(), 3);
        assert_eq!(element_order(&QuadForm::new(6, 2, 9).unwrap(), &b).unwrap(), 3);
    }

    #[test]
    fn known_noncyclic_groups() {
        let b = EngineBounds::default();
        // h(-84) = 4 with group C2 x C2; h(-420) = 8 with C2^3; h(-3299) = 27 with C3 x C9.
        assert_eq!(class_group_structure(&disc(-84), &b).unwrap().elementary_divisors, vec![2, 2]);
        assert_eq!(class_group_structure(&disc(-420), &b).unwrap().elementary_divisors, vec![2, 2, 2]);
        assert_eq!(class_group_structure(&disc(-3299), &b).unwrap().elementary_divisors, vec![3, 9]);
    }

    #[test]
    fn structure_is_consistent_with_element_counts() {
        let b = EngineBounds::default();
        for d in (3..4000i128).map(|x| -x).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            let dd = disc(d);
            let s = class_group_structure(&dd, &b).unwrap();
            let id = identity_form(&dd);
            assert_eq!(s.elementary_divisors.iter().product::<u64>(), s.class_number);
            for w in s.elementary_divisors.windows(2) {
                assert_eq!(w[1] % w[0], 0, "D = {d}");
            }
            for (g, &n) in s.generators.iter().zip(&s.elementary_divisors) {
                assert_eq!(naive_order(g, &id), n, "D = {d}");
            }
            // The exponent is the largest element order.
            let forms = reduced_forms(&dd, &b).unwrap();
            let max_order = forms.iter().map(|f| naive_order(f, &id)).max().unwrap();
            assert_eq!(max_order, s.exponent(), "D = {d}");
            // Number of elements killed by 2 pins the 2-rank.
            let two_torsion = forms.iter().filter(|f| compose(f, f) == id).count() as u64;
            let two_rank = s.elementary_divisors.iter().filter(|&&n| n % 2 == 0).count() as u32;
            assert_eq!(two_torsion, 1 << two_rank, "D = {d}");
        }
    }

    #[test]
    fn smith_form_small() {
        let (diag, _) = smith_normal_form(vec![vec![2, 0], vec![0, 3]]);
        let mut d: Vec<i128> = diag.into_iter().filter(|&x| x != 1).collect();
        d.sort();
        assert_eq!(d, vec![6]);
        let (diag, _) = smith_normal_form(vec![vec![4, 0], vec![-2, 2]]);
        assert_eq!(diag, vec![2, 4]);
    }
}
