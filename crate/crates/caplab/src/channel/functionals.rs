//! Shannon information functionals in nats.
//!
//! Extended-real values are represented as `f64` with IEEE infinities. All
//! sums follow the standard conventions: a term `a·ln(b/c)` is 0 when a = 0,
//! +inf when a > 0, b > 0, c = 0, and -inf when a > 0, b = 0, c > 0.

use super::dmc::{ChannelError, Dmc, Pmf};

/// Shannon entropy `H(p)`.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// Kullback-Leibler divergence `D(q || r)`; +inf when `q` puts mass where
/// `r` does not.
pub fn kl_divergence(q: &[f64], r: &[f64]) -> f64 {
    assert_eq!(q.len(), r.len(), "divergence needs equal-length pmfs");
    let mut d = 0.0;
    for (&qi, &ri) in q.iter().zip(r) {
        if qi == 0.0 {
            continue;
        }
        if ri == 0.0 {
            return f64::INFINITY;
        }
        d += qi * (qi / ri).ln();
    }
    d.max(0.0)
}

/// Mutual information `I(P, V)` for a transition matrix `v` (rows indexed by
/// inputs). Always finite.
pub fn mutual_information(p: &[f64], v: &[Vec<f64>]) -> f64 {
    let ny = v.first().map_or(0, Vec::len);
    let mut q = vec![0.0; ny];
    for (x, &px) in p.iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        for (y, qy) in q.iter_mut().enumerate() {
            *qy += px * v[x][y];
        }
    }
    let mut i = 0.0;
    for (x, &px) in p.iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        for (y, &qy) in q.iter().enumerate() {
            let vxy = v[x][y];
            if vxy > 0.0 {
                i += px * vxy * (vxy / qy).ln();
            }
        }
    }
    i.max(0.0)
}

/// Conditional entropy `H(V | P)`.
pub fn conditional_entropy(p: &[f64], v: &[Vec<f64>]) -> f64 {
    p.iter()
        .zip(v)
        .filter(|(&px, _)| px > 0.0)
        .map(|(&px, row)| px * entropy(row))
        .sum()
}

/// Conditional divergence `D(V || W | P)`; +inf exactly when some input x
/// with `p(x) > 0` has `V(y|x) > 0 = W(y|x)` for some y.
pub fn conditional_divergence(p: &[f64], v: &[Vec<f64>], w: &[Vec<f64>]) -> f64 {
    let mut d = 0.0;
    for (x, &px) in p.iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        for (y, &vxy) in v[x].iter().enumerate() {
            if vxy == 0.0 {
                continue;
            }
            if w[x][y] == 0.0 {
                return f64::INFINITY;
            }
            d += px * vxy * (vxy / w[x][y]).ln();
        }
    }
    d.max(0.0)
}

/// The standard functionals for an input distribution `p`, an auxiliary
/// transition matrix `v`, and a channel `w` of the same shape.
#[derive(Debug, Clone)]
pub struct InfoFunctionals {
    /// `H(P)`.
    pub h_input: f64,
    /// `H(V|P)`.
    pub h_output_given_input: f64,
    /// `I(P, V)`.
    pub mutual_info: f64,
    /// `D(PV || PW)`: divergence between the output distributions.
    pub output_divergence: f64,
    /// `D(V || W | P)`.
    pub cond_divergence: f64,
}

/// Evaluates all functionals at once, validating shapes.
pub fn info_functionals(
    p: &Pmf,
    v: &[Vec<f64>],
    w: &Dmc,
) -> Result<InfoFunctionals, ChannelError> {
    if p.len() != w.num_inputs() {
        return Err(ChannelError::PmfLength {
            got: p.len(),
            expected: w.num_inputs(),
        });
    }
    if v.len() != w.num_inputs() {
        return Err(ChannelError::RowCount {
            rows: v.len(),
            inputs: w.num_inputs(),
        });
    }
    for (x, row) in v.iter().enumerate() {
        if row.len() != w.num_outputs() {
            return Err(ChannelError::Ragged {
                row: x,
                got: row.len(),
                expected: w.num_outputs(),
            });
        }
    }
    let pv = {
        let mut q = vec![0.0; w.num_outputs()];
        for (x, &px) in p.iter().enumerate() {
            for (y, qy) in q.iter_mut().enumerate() {
                *qy += px * v[x][y];
            }
        }
        q
    };
    let pw = w.output_distribution(p);
    Ok(InfoFunctionals {
        h_input: entropy(p),
        h_output_given_input: conditional_entropy(p, v),
        mutual_info: mutual_information(p, v),
        output_divergence: kl_divergence(&pv, &pw),
        cond_divergence: conditional_divergence(p, v, w.rows()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::fixtures;

    #[test]
    fn identity_channel_has_full_mutual_information() {
        let p = Pmf::uniform(2);
        let v = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let w = fixtures::noiseless(2);
        let f = info_functionals(&p, &v, &w).unwrap();
        assert!((f.mutual_info - std::f64::consts::LN_2).abs() < 1e-14);
        assert_eq!(f.h_output_given_input, 0.0);
        assert!((f.h_input - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn point_mass_input_gives_zero_information() {
        let p = Pmf::point_mass(2, 0);
        let v = vec![vec![0.7, 0.3], vec![0.2, 0.8]];
        let w = fixtures::binary_symmetric(0.3);
        let f = info_functionals(&p, &v, &w).unwrap();
        assert_eq!(f.mutual_info, 0.0);
    }

    #[test]
    fn conditional_divergence_between_bscs() {
        // Two-term sum per input; the symmetric rows make both inputs
        // contribute the same amount.
        let p = Pmf::uniform(2);
        let v = fixtures::binary_symmetric(0.1);
        let w = fixtures::binary_symmetric(0.2);
        let f = info_functionals(&p, v.rows(), &w).unwrap();
        let expected = 0.1 * (0.1f64 / 0.2).ln() + 0.9 * (0.9f64 / 0.8).ln();
        assert!((f.cond_divergence - expected).abs() < 1e-12);
        assert!((expected - 0.036690014034750584).abs() < 1e-15);
    }

    #[test]
    fn divergence_infinite_only_on_support_violation() {
        let p = Pmf::uniform(2);
        let w = fixtures::z_channel(0.3);
        // V puts mass where W has a structural zero on input 0.
        let v = vec![vec![0.5, 0.5], vec![0.3, 0.7]];
        let f = info_functionals(&p, &v, &w).unwrap();
        assert!(f.cond_divergence.is_infinite());
        // Mass only inside the support is fine.
        let v2 = vec![vec![1.0, 0.0], vec![0.5, 0.5]];
        let f2 = info_functionals(&p, &v2, &w).unwrap();
        assert!(f2.cond_divergence.is_finite());
    }

    #[test]
    fn zero_mass_rows_are_ignored_by_convention() {
        let p = Pmf::point_mass(2, 1);
        let w = fixtures::z_channel(0.3);
        // Input 0 violates absolute continuity but carries no mass.
        let v = vec![vec![0.5, 0.5], vec![1.0, 0.0]];
        let f = info_functionals(&p, &v, &w).unwrap();
        assert!(f.cond_divergence.is_finite());
    }

    #[test]
    fn kl_divergence_basics() {
        assert_eq!(kl_divergence(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).is_infinite());
        let d = kl_divergence(&[0.3, 0.7], &[0.5, 0.5]);
        let expected = 0.3 * (0.3f64 / 0.5).ln() + 0.7 * (0.7f64 / 0.5).ln();
        assert!((d - expected).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatches_are_rejected() {
        let p = Pmf::uniform(3);
        let w = fixtures::binary_symmetric(0.1);
        assert!(info_functionals(&p, w.rows(), &w).is_err());
        let p2 = Pmf::uniform(2);
        let ragged = vec![vec![1.0, 0.0], vec![1.0]];
        assert!(info_functionals(&p2, &ragged, &w).is_err());
    }
}
