use crate::linalg::Scalar;

/// Krein entries at or below this fraction of the largest entry count as zero
/// in float mode.
pub const KREIN_ZERO_REL: f64 = 1e-8;

/// The Krein parameters `q^h_{ij}` under some labeling of the idempotents.
#[derive(Clone, Debug, PartialEq)]
pub struct KreinTable<S> {
    diameter: usize,
    data: Vec<S>,
}

impl<S: Scalar> KreinTable<S> {
    pub(crate) fn from_fn(diameter: usize, mut f: impl FnMut(usize, usize, usize) -> S) -> Self {
        let m = diameter + 1;
        let mut data = Vec::with_capacity(m * m * m);
        for h in 0..m {
            for i in 0..m {
                for j in 0..m {
                    data.push(f(h, i, j));
                }
            }
        }
        Self { diameter, data }
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn get(&self, h: usize, i: usize, j: usize) -> &S {
        let m = self.diameter + 1;
        &self.data[(h * m + i) * m + j]
    }

    /// Overwrites one entry; used to build corrupted tables in tests.
    pub fn set(&mut self, h: usize, i: usize, j: usize, value: S) {
        let m = self.diameter + 1;
        self.data[(h * m + i) * m + j] = value;
    }

    /// Relabels so that new index `k` refers to old index `ordering[k]`.
    pub fn permuted(&self, ordering: &[usize]) -> Self {
        Self::from_fn(self.diameter, |h, i, j| self.get(ordering[h], ordering[i], ordering[j]).clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn is_zero_entry(&self, h: usize, i: usize, j: usize) -> bool {
        self.get(h, i, j).is_negligible(self.max_abs(), KREIN_ZERO_REL)
    }

    /// `nonzero[h][i][j]` under the current labeling.
    pub fn nonzero_pattern(&self) -> Vec<Vec<Vec<bool>>> {
        let m = self.diameter + 1;
        let scale = self.max_abs();
        (0..m)
            .map(|h| {
                (0..m)
                    .map(|i| (0..m).map(|j| !self.get(h, i, j).is_negligible(scale, KREIN_ZERO_REL)).collect())
                    .collect()
            })
            .collect()
    }

    /// The most negative entry, if any is negative beyond the zero threshold.
    pub fn negative_entry(&self) -> Option<(usize, usize, usize, f64)> {
        let m = self.diameter + 1;
        let scale = self.max_abs();
        let mut worst: Option<(usize, usize, usize, f64)> = None;
        for h in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let q = self.get(h, i, j);
                    if *q < S::zero() && !q.is_negligible(scale, KREIN_ZERO_REL) {
                        let v = q.to_f64();
                        if worst.map_or(true, |w| v < w.3) {
                            worst = Some((h, i, j, v));
                        }
                    }
                }
            }
        }
        worst
    }
}

fn pattern_violated(zero: bool, h: usize, i: usize, j: usize) -> bool {
    let largest = h.max(i).max(j);
    let others = h + i + j - largest;
    (largest > others && !zero) || (largest == others && zero)
}

/// First triple `(h, i, j)`, in the labels of `ordering`, where the table
/// breaks the Q-polynomial zero pattern: `q^h_{ij}` vanishes when one index
/// exceeds the sum of the other two and is nonzero when one index equals it.
pub fn qpoly_violation<S: Scalar>(table: &KreinTable<S>, ordering: &[usize]) -> Option<(usize, usize, usize)> {
    let m = table.diameter() + 1;
    let scale = table.max_abs();
    for h in 0..m {
        for i in 0..m {
            for j in 0..m {
                let zero = table.get(ordering[h], ordering[i], ordering[j]).is_negligible(scale, KREIN_ZERO_REL);
                if pattern_violated(zero, h, i, j) {
                    return Some((h, i, j));
                }
            }
        }
    }
    None
}

/// Every ordering of `0..=D` fixing 0 under which the table has the
/// Q-polynomial zero pattern, in lexicographic order.
///
/// Exhaustive over the `D!` candidates, with prefixes pruned as soon as some
/// triple among the already-placed labels breaks the pattern.
pub fn find_qpoly_orderings<S: Scalar>(table: &KreinTable<S>) -> Vec<Vec<usize>> {
    let m = table.diameter() + 1;
    let scale = table.max_abs();
    let zero: Vec<bool> = (0..m * m * m)
        .map(|k| table.get(k / (m * m), (k / m) % m, k % m).is_negligible(scale, KREIN_ZERO_REL))
        .collect();
    let is_zero = |h: usize, i: usize, j: usize| zero[(h * m + i) * m + j];

    let mut found = Vec::new();
    let mut prefix = vec![0usize];
    let mut used = vec![false; m];
    used[0] = true;

    fn extend(
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        m: usize,
        is_zero: &dyn Fn(usize, usize, usize) -> bool,
        found: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == m {
            found.push(prefix.clone());
            return;
        }
        for cand in 0..m {
            if used[cand] {
                continue;
            }
            prefix.push(cand);
            let k = prefix.len() - 1;
            // only triples involving the new label need checking
            let ok = (0..=k).all(|a| {
                (0..=k).all(|b| {
                    [(k, a, b), (a, k, b), (a, b, k)].iter().all(|&(h, i, j)| {
                        !pattern_violated(is_zero(prefix[h], prefix[i], prefix[j]), h, i, j)
                    })
                })
            });
            if ok {
                used[cand] = true;
                extend(prefix, used, m, is_zero, found);
                used[cand] = false;
            }
            prefix.pop();
        }
    }

    extend(&mut prefix, &mut used, m, &is_zero, &mut found);
    found
}
