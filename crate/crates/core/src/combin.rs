//! Binomial coefficients and colexicographic ranking of index tuples.
//!
//! A strictly increasing tuple (i_1 < i_2 < ... < i_a) of 0-based indices has
//! colex rank  sum_j C(i_j, j)  (j counted from 1). Colex order sorts tuples
//! by their largest element first, so per-degree coefficient tables laid out
//! in colex order are walked strictly sequentially by the evaluation kernels.

/// Rectangular table of C(n, k) for 0 <= n <= n_max, 0 <= k <= k_max.
#[derive(Debug, Clone)]
pub struct BinomTable {
    n_max: usize,
    k_max: usize,
    table: Vec<u64>,
}

impl BinomTable {
    pub fn new(n_max: usize, k_max: usize) -> Self {
        let mut table = vec![0u64; (n_max + 1) * (k_max + 1)];
        for n in 0..=n_max {
            for k in 0..=k_max.min(n) {
                let v = if k == 0 || k == n {
                    1
                } else {
                    table[(n - 1) * (k_max + 1) + k - 1] + table[(n - 1) * (k_max + 1) + k]
                };
                table[n * (k_max + 1) + k] = v;
            }
        }
        Self { n_max, k_max, table }
    }

    /// C(n, k); zero when k > n. Panics if outside the table.
    #[inline]
    pub fn choose(&self, n: usize, k: usize) -> u64 {
        debug_assert!(n <= self.n_max && k <= self.k_max);
        self.table[n * (self.k_max + 1) + k]
    }

    /// Colex rank of a strictly increasing index tuple.
    #[inline]
    pub fn colex_rank(&self, tuple: &[usize]) -> usize {
        let mut r = 0u64;
        for (j, &i) in tuple.iter().enumerate() {
            r += self.choose(i, j + 1);
        }
        r as usize
    }

    /// Inverse of [`colex_rank`]: writes the tuple for `rank` into `out`.
    pub fn colex_unrank(&self, mut rank: u64, degree: usize, out: &mut [usize]) {
        debug_assert_eq!(out.len(), degree);
        let mut hi = self.n_max;
        for j in (1..=degree).rev() {
            // Largest i with C(i, j) <= rank; i >= j-1 always qualifies.
            let mut i = j - 1;
            let mut probe = i;
            while probe + 1 <= hi && self.choose(probe + 1, j) <= rank {
                probe += 1;
                i = probe;
            }
            rank -= self.choose(i, j);
            out[j - 1] = i;
            hi = i.saturating_sub(1);
        }
    }
}

/// Number of strictly increasing a-tuples over n indices, summed for
/// a = 1..=k: the coefficient count of a full degree-k landscape.
/// Returns per-degree counts and the total; None on overflow.
pub fn coeff_counts(n_dims: usize, degree: usize) -> Option<(Vec<u128>, u128)> {
    let mut per_degree = Vec::with_capacity(degree);
    let mut total: u128 = 0;
    for a in 1..=degree {
        let mut c: u128 = 1;
        for j in 0..a {
            c = c.checked_mul((n_dims - j) as u128)?;
            c /= (j + 1) as u128;
        }
        per_degree.push(c);
        total = total.checked_add(c)?;
    }
    Some((per_degree, total))
}

/// Visits every strictly increasing `degree`-tuple over 0..n in colex order.
pub fn for_each_colex<F: FnMut(&[usize])>(n: usize, degree: usize, mut f: F) {
    let mut tuple = vec![0usize; degree];
    fn rec<F: FnMut(&[usize])>(
        n_excl: usize,
        pos: usize,
        tuple: &mut [usize],
        f: &mut F,
    ) {
        if pos == 0 {
            f(tuple);
            return;
        }
        for top in (pos - 1)..n_excl {
            tuple[pos - 1] = top;
            rec(top, pos - 1, tuple, f);
        }
    }
    if degree == 0 || degree > n {
        return;
    }
    rec(n, degree, &mut tuple, &mut f);
}
