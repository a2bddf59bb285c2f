//! Method-of-types machinery: type classes, conditional types, shell sizes,
//! and the message partitions used by the list-decoding schemes.
//!
//! Counts are exact integers throughout; shell sizes use checked `u128`
//! arithmetic and report overflow as `None` instead of saturating.

use super::dmc::ChannelError;

/// Empirical distribution of a sequence as integer counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeClass {
    counts: Vec<u32>,
}

impl TypeClass {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Sequence length this type describes.
    pub fn n(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// The type as a probability vector.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// A canonical member of the class: symbol 0 repeated, then symbol 1,
    /// and so on.
    pub fn canonical_sequence(&self) -> Vec<usize> {
        let mut seq = Vec::with_capacity(self.n() as usize);
        for (symbol, &c) in self.counts.iter().enumerate() {
            seq.extend(std::iter::repeat(symbol).take(c as usize));
        }
        seq
    }
}

/// All compositions of `n` into `k` parts, first coordinate descending;
/// for n=2, k=2 the order is (2,0), (1,1), (0,2).
pub fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    assert!(k >= 1);
    let mut out = Vec::new();
    let mut current = vec![0u32; k];
    fill(n, 0, &mut current, &mut out);
    return out;

    fn fill(rest: u32, idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == current.len() - 1 {
            current[idx] = rest;
            out.push(current.clone());
            return;
        }
        for c in (0..=rest).rev() {
            current[idx] = c;
            fill(rest - c, idx + 1, current, out);
        }
    }
}

/// Multinomial coefficient `n! / prod(counts!)` with checked arithmetic;
/// `None` on u128 overflow.
pub fn multinomial(counts: &[u32]) -> Option<u128> {
    // Incremental binomial products keep intermediate values integral:
    // C(n1, c1) * C(n1+n2, n2) * ...
    let mut total: u64 = 0;
    let mut result: u128 = 1;
    for &c in counts {
        for i in 1..=c as u64 {
            total += 1;
            // result *= total; result /= i; in an order that stays integral.
            result = result.checked_mul(total as u128)?;
            result /= i as u128;
        }
    }
    Some(result)
}

/// Number of sequences with type `t`.
pub fn shell_size(t: &TypeClass) -> Option<u128> {
    multinomial(t.counts())
}

/// Type of a sequence over an alphabet of size `k`.
pub fn type_of(seq: &[usize], k: usize) -> TypeClass {
    let mut counts = vec![0u32; k];
    for &s in seq {
        assert!(s < k, "symbol {s} outside alphabet of size {k}");
        counts[s] += 1;
    }
    TypeClass::new(counts)
}

/// Conditional type of `ys` given `xs` as a count matrix;
/// `counts[x][y]` is the number of positions i with xs[i]=x, ys[i]=y.
/// Rows for symbols absent from `xs` are all zero, so equality of count
/// matrices is exactly equality of conditional types in the partial sense.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionalType {
    counts: Vec<Vec<u32>>,
}

impl ConditionalType {
    pub fn new(counts: Vec<Vec<u32>>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }

    /// Row sums: how many positions carry each input symbol.
    pub fn input_counts(&self) -> Vec<u32> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    /// Transition probabilities on rows with positive count; other rows are
    /// left as zero rows.
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let s: u32 = row.iter().sum();
                if s == 0 {
                    vec![0.0; row.len()]
                } else {
                    row.iter().map(|&c| c as f64 / s as f64).collect()
                }
            })
            .collect()
    }
}

pub fn conditional_type_of(xs: &[usize], ys: &[usize], kx: usize, ky: usize) -> ConditionalType {
    assert_eq!(xs.len(), ys.len(), "sequences must have equal length");
    let mut counts = vec![vec![0u32; ky]; kx];
    for (&x, &y) in xs.iter().zip(ys) {
        counts[x][y] += 1;
    }
    ConditionalType::new(counts)
}

/// Size of the V-shell of any sequence with input counts matching `v`:
/// the product over inputs of per-row multinomials.
pub fn conditional_shell_size(v: &ConditionalType) -> Option<u128> {
    let mut size: u128 = 1;
    for row in v.counts() {
        size = size.checked_mul(multinomial(row)?)?;
    }
    Some(size)
}

/// Enumerates every conditional type compatible with the given input counts
/// (a composition of each positive row count into `ky` parts). Errors when
/// the total count would exceed `cap`.
pub fn enumerate_conditional_types(
    x_counts: &[u32],
    ky: usize,
    cap: u128,
) -> Result<Vec<ConditionalType>, ChannelError> {
    let mut total: u128 = 1;
    for &c in x_counts {
        if c == 0 {
            continue;
        }
        let per_row = multinomial_count(c, ky);
        total = total
            .checked_mul(per_row)
            .filter(|&t| t <= cap)
            .ok_or(ChannelError::SizeCap {
                size: u128::MAX,
                cap,
            })?;
    }
    if total > cap {
        return Err(ChannelError::SizeCap { size: total, cap });
    }
    let mut result = vec![ConditionalType::new(
        x_counts.iter().map(|_| vec![0u32; ky]).collect(),
    )];
    for (x, &c) in x_counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let rows = compositions(c, ky);
        let mut next = Vec::with_capacity(result.len() * rows.len());
        for base in &result {
            for row in &rows {
                let mut counts = base.counts().to_vec();
                counts[x] = row.clone();
                next.push(ConditionalType::new(counts));
            }
        }
        result = next;
    }
    Ok(result)
}

/// Number of compositions of `c` into `k` parts: C(c+k-1, k-1).
fn multinomial_count(c: u32, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..(k as u128 - 1) {
        acc = acc.saturating_mul(c as u128 + i + 1);
        acc /= i + 1;
    }
    acc
}

/// Messages whose codeword sees `y` in the V-shell: the set of m with
/// conditional type of y given codeword m equal to `v`. Returned ascending.
pub fn messages_in_shell(
    codewords: &[Vec<usize>],
    y: &[usize],
    v: &ConditionalType,
    kx: usize,
    ky: usize,
) -> Vec<usize> {
    codewords
        .iter()
        .enumerate()
        .filter(|(_, cw)| conditional_type_of(cw, y, kx, ky) == *v)
        .map(|(m, _)| m)
        .collect()
}

/// The type with denominator `n` closest to `p` in total variation; ties go
/// to the lexicographically smallest count vector.
pub fn closest_type(p: &[f64], n: u32) -> TypeClass {
    let k = p.len();
    let scaled: Vec<f64> = p.iter().map(|&pi| pi * n as f64).collect();
    let mut counts: Vec<u32> = scaled.iter().map(|&s| s.floor() as u32).collect();
    let assigned: u32 = counts.iter().sum();
    let mut remaining = n - assigned;
    // Hand out the leftover units by largest fractional part; on ties prefer
    // the larger index, which keeps earlier counts smaller and the count
    // vector lexicographically smallest among TV minimizers.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        let fi = scaled[i] - counts[i] as f64;
        let fj = scaled[j] - counts[j] as f64;
        fj.partial_cmp(&fi)
            .unwrap()
            .then_with(|| j.cmp(&i))
    });
    for &i in &order {
        if remaining == 0 {
            break;
        }
        counts[i] += 1;
        remaining -= 1;
    }
    TypeClass::new(counts)
}
