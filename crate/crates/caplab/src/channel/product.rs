//! Memoryless extension `W^n` of a channel.

use super::dmc::{ChannelError, Dmc};

const MAX_PRODUCT_ENTRIES: u128 = 10_000_000;

/// Builds the n-fold product channel on tuple alphabets in lexicographic
/// order (first coordinate most significant). Fails when the transition
/// matrix would exceed 10^7 entries.
pub fn product_channel(w: &Dmc, n: u32) -> Result<Dmc, ChannelError> {
    assert!(n >= 1, "product channel needs n >= 1");
    let nx = w.num_inputs() as u128;
    let ny = w.num_outputs() as u128;
    let rows_n = nx.checked_pow(n);
    let cols_n = ny.checked_pow(n);
    let entries = rows_n.and_then(|r| cols_n.and_then(|c| r.checked_mul(c)));
    match entries {
        Some(e) if e <= MAX_PRODUCT_ENTRIES => {}
        other => {
            return Err(ChannelError::SizeCap {
                size: other.unwrap_or(u128::MAX),
                cap: MAX_PRODUCT_ENTRIES,
            })
        }
    }
    let rows_n = rows_n.unwrap() as usize;
    let cols_n = cols_n.unwrap() as usize;
    let inputs = tuple_labels(w.input_labels(), n);
    let outputs = tuple_labels(w.output_labels(), n);
    let kx = w.num_inputs();
    let ky = w.num_outputs();
    let mut rows = Vec::with_capacity(rows_n);
    let mut xs = vec![0usize; n as usize];
    for xi in 0..rows_n {
        decode_tuple(xi, kx, &mut xs);
        let mut row = Vec::with_capacity(cols_n);
        let mut ys = vec![0usize; n as usize];
        for yi in 0..cols_n {
            decode_tuple(yi, ky, &mut ys);
            let mut p = 1.0;
            for (&x, &y) in xs.iter().zip(&ys) {
                p *= w.w(x, y);
                if p == 0.0 {
                    break;
                }
            }
            row.push(p);
        }
        rows.push(row);
    }
    Dmc::new(inputs, outputs, rows)
}

/// Writes the digits of `index` in base `base`, most significant first.
pub fn decode_tuple(index: usize, base: usize, out: &mut [usize]) {
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = rest % base;
        rest /= base;
    }
}

fn tuple_labels(labels: &[String], n: u32) -> Vec<String> {
    let single_char = labels.iter().all(|l| l.chars().count() == 1);
    let sep = if single_char { "" } else { "," };
    let mut acc: Vec<String> = vec![String::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(acc.len() * labels.len());
        for prefix in &acc {
            for l in labels {
                let mut s = prefix.clone();
                if !prefix.is_empty() {
                    s.push_str(sep);
                }
                s.push_str(l);
                next.push(s);
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;

    #[test]
    fn first_power_is_the_channel_itself() {
        let w = fixtures::binary_symmetric(0.1);
        let w1 = product_channel(&w, 1).unwrap();
        assert_eq!(w1.rows(), w.rows());
    }

    #[test]
    fn bsc_squared_diagonal_entry() {
        let w = fixtures::binary_symmetric(0.1);
        let w2 = product_channel(&w, 2).unwrap();
        // Entry ((0,0) -> (0,0)) = 0.9 * 0.9.
        assert!((w2.w(0, 0) - 0.81).abs() < 1e-15);
        assert!((w2.w(0, 3) - 0.01).abs() < 1e-15);
        assert_eq!(w2.input_labels()[1], "01");
    }

    #[test]
    fn rows_stay_stochastic_and_marginalize_back() {
        let w = fixtures::fig2(0.1, 0.3);
        let w2 = product_channel(&w, 2).unwrap();
        let ky = w.num_outputs();
        for x2 in 0..w2.num_inputs() {
            let sum: f64 = w2.row(x2).iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        // Summing over the second output coordinate recovers the first-letter
        // channel law.
        for x in 0..w.num_inputs() {
            for y in 0..ky {
                let marginal: f64 = (0..ky).map(|y2| w2.w(x * w.num_inputs(), y * ky + y2)).sum();
                assert!((marginal - w.w(x, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let w = fixtures::noiseless(10);
        assert!(product_channel(&w, 8).is_err());
    }
}
