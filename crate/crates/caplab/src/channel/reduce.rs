//! Capacity-preserving channel reductions: output merging, product-form
//! factorization, and the binary-input normal form.

use super::dmc::{ChannelError, Dmc};

/// Result of merging outputs with identical support sets.
#[derive(Debug, Clone)]
pub struct MergeResult {
    pub channel: Dmc,
    /// `groups[j]` lists the original output indices combined into new
    /// output j, each group sorted ascending.
    pub groups: Vec<Vec<usize>>,
}

/// Merges outputs whose support sets `X(y)` coincide by summing their
/// columns. The merged symbol keeps the label and position order of the
/// smallest original index; the operation is idempotent.
pub fn merge_equivalent_outputs(w: &Dmc) -> MergeResult {
    let ny = w.num_outputs();
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for y in 0..ny {
        let supp = w.output_support(y);
        match groups.iter_mut().find(|(s, _)| *s == supp) {
            Some((_, members)) => members.push(y),
            None => groups.push((supp, vec![y])),
        }
    }
    // Order merged outputs by their smallest original member.
    groups.sort_by_key(|(_, members)| members[0]);
    let labels: Vec<String> = groups
        .iter()
        .map(|(_, members)| w.output_labels()[members[0]].clone())
        .collect();
    let rows: Vec<Vec<f64>> = (0..w.num_inputs())
        .map(|x| {
            groups
                .iter()
                .map(|(_, members)| members.iter().map(|&y| w.w(x, y)).sum())
                .collect()
        })
        .collect();
    let channel = Dmc::new(w.input_labels().to_vec(), labels, rows)
        .expect("merged rows stay stochastic");
    MergeResult {
        channel,
        groups: groups.into_iter().map(|(_, m)| m).collect(),
    }
}

/// A product-form decomposition `W(y|x) = A(x)·B(y)` valid on all positive
/// entries.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Searches for a factorization of the positive entries. Potentials are
/// assigned per connected component of the channel graph in log domain and
/// every edge is then checked for consistency to 1e-9; channels with acyclic
/// graphs always succeed.
pub fn check_factorization(w: &Dmc) -> Option<Factorization> {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let n = nx + ny;
    // log A on 0..nx, log B on nx..nx+ny.
    let mut potential = vec![f64::NAN; n];
    for start in 0..n {
        if !potential[start].is_nan() {
            continue;
        }
        potential[start] = 0.0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            if v < nx {
                for y in w.input_support(v) {
                    let u = nx + y;
                    let need = w.w(v, y).ln() - potential[v];
                    if potential[u].is_nan() {
                        potential[u] = need;
                        queue.push_back(u);
                    }
                }
            } else {
                let y = v - nx;
                for x in w.output_support(y) {
                    let need = w.w(x, y).ln() - potential[v];
                    if potential[x].is_nan() {
                        potential[x] = need;
                        queue.push_back(x);
                    }
                }
            }
        }
    }
    for x in 0..nx {
        for y in 0..ny {
            let wxy = w.w(x, y);
            if wxy > 0.0 && (potential[x] + potential[nx + y] - wxy.ln()).abs() > 1e-9 {
                return None;
            }
        }
    }
    Some(Factorization {
        a: potential[..nx].iter().map(|&l| l.exp()).collect(),
        b: potential[nx..].iter().map(|&l| l.exp()).collect(),
    })
}

/// Normal form for binary-input channels: merging equivalent outputs leaves
/// at most three outputs (supports {x0}, {x1}, {x0, x1}), and the resulting
/// graph is acyclic.
pub fn binary_input_reduce(w: &Dmc) -> Result<Dmc, ChannelError> {
    if w.num_inputs() != 2 {
        return Err(ChannelError::BinaryInputRequired {
            inputs: w.num_inputs(),
        });
    }
    Ok(merge_equivalent_outputs(w).channel)
}
