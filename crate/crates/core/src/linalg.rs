//! Exact kernel computation for sparse column vectors over [`Scalar`].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;

struct Pivot<K> {
    // reduced column, leading entry normalized to 1
    vector: BTreeMap<K, Scalar>,
    // coefficients of the original columns producing `vector`
    combo: BTreeMap<usize, Scalar>,
}

fn axpy<K: Ord + Clone>(y: &mut BTreeMap<K, Scalar>, a: &Scalar, x: &BTreeMap<K, Scalar>) {
    for (k, v) in x {
        let t = a * v;
        let drop = match y.get_mut(k) {
            Some(e) => {
                *e = &*e + &t;
                e.is_zero()
            }
            None => {
                if !t.is_zero() {
                    y.insert(k.clone(), t);
                }
                false
            }
        };
        if drop {
            y.remove(k);
        }
    }
}

/// Basis of `{c : sum_i c_i cols[i] = 0}`, one vector per dependent column.
///
/// Columns are put into echelon form by their largest key; each column that
/// reduces to zero contributes the combination that annihilated it.
pub(crate) fn kernel<K: Ord + Clone>(cols: &[BTreeMap<K, Scalar>]) -> Vec<Vec<Scalar>> {
    let mut pivots: BTreeMap<K, Pivot<K>> = BTreeMap::new();
    let mut out = Vec::new();
    for (idx, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = BTreeMap::new();
        combo.insert(idx, Scalar::one());
        loop {
            let Some((lead, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
                let mut k = vec![Scalar::zero(); cols.len()];
                for (i, c) in combo {
                    k[i] = c;
                }
                out.push(k);
                break;
            };
            match pivots.get(&lead) {
                Some(p) => {
                    let f = -c;
                    axpy(&mut v, &f, &p.vector);
                    axpy(&mut combo, &f, &p.combo);
                }
                None => {
                    let inv = c.recip().expect("nonzero leading entry");
                    let vector = v.iter().map(|(k, x)| (k.clone(), x * &inv)).collect();
                    let combo = combo.iter().map(|(k, x)| (*k, x * &inv)).collect();
                    pivots.insert(lead, Pivot { vector, combo });
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(entries: &[(u8, i64)]) -> BTreeMap<u8, Scalar> {
        entries.iter().map(|&(k, v)| (k, Scalar::from_int(v))).collect()
    }

    #[test]
    fn finds_dependencies() {
        let cols = [col(&[]), col(&[(0, 1), (1, 2)]), col(&[(1, 1)]), col(&[(0, 2), (1, 5)])];
        let k = kernel(&cols);
        assert_eq!(k.len(), 2);
        for v in &k {
            let mut sum: BTreeMap<u8, Scalar> = BTreeMap::new();
            for (c, x) in cols.iter().zip(v) {
                axpy(&mut sum, x, c);
            }
            assert!(sum.is_empty());
        }
    }

    #[test]
    fn independent_columns_have_trivial_kernel() {
        let cols = [col(&[(0, 1)]), col(&[(0, 1), (1, 1)]), col(&[(2, 3)])];
        assert!(kernel(&cols).is_empty());
    }
}
