//! Structural analysis of the channel graph.
//!
//! The channel graph is the undirected bipartite graph on inputs and outputs
//! with an edge (x, y) whenever W(y|x) > 0. A channel is acyclic when the
//! graph has no cycle, i.e. no alternating sequence of distinct inputs and
//! distinct outputs x_1, y_1, x_2, ..., x_n, y_n with n >= 2 where
//! consecutive pairs (and y_n, x_1) are edges.

use super::dmc::Dmc;

/// Support structure of a channel.
#[derive(Debug, Clone)]
pub struct ChannelGraph {
    /// `X(y)`: inputs that can produce output y.
    pub output_supports: Vec<Vec<usize>>,
    /// Outputs reachable from each input x.
    pub input_supports: Vec<Vec<usize>>,
    /// `Z(x)`: outputs that input x can never produce.
    pub zero_sets: Vec<Vec<usize>>,
    /// True when the bipartite channel graph contains no cycle.
    pub acyclic: bool,
    /// For channels whose input labels all appear among the output labels:
    /// the smallest eps with W(x|x) >= 1 - eps for every input x.
    pub epsilon_noise: Option<f64>,
}

/// Computes supports, zero sets, acyclicity, and the epsilon-noise parameter.
pub fn supports_and_graph(w: &Dmc) -> ChannelGraph {
    let nx = w.num_inputs();
    let ny = w.num_outputs();
    let output_supports: Vec<Vec<usize>> = (0..ny).map(|y| w.output_support(y)).collect();
    let input_supports: Vec<Vec<usize>> = (0..nx).map(|x| w.input_support(x)).collect();
    let zero_sets: Vec<Vec<usize>> = (0..nx)
        .map(|x| (0..ny).filter(|&y| w.w(x, y) == 0.0).collect())
        .collect();
    let acyclic = is_acyclic(&input_supports, nx, ny);
    let epsilon_noise = epsilon_noise_level(w);
    ChannelGraph {
        output_supports,
        input_supports,
        zero_sets,
        acyclic,
        epsilon_noise,
    }
}

/// Cycle detection by iterative DFS. Vertices 0..nx are inputs and
/// nx..nx+ny are outputs; a back edge to a non-parent visited vertex closes a
/// cycle, which in a simple bipartite graph always alternates distinct inputs
/// and distinct outputs.
fn is_acyclic(input_supports: &[Vec<usize>], nx: usize, ny: usize) -> bool {
    let n = nx + ny;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, ys) in input_supports.iter().enumerate() {
        for &y in ys {
            adj[x].push(nx + y);
            adj[nx + y].push(x);
        }
    }
    let mut visited = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut stack = vec![(start, usize::MAX)];
        while let Some((v, from)) = stack.pop() {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            parent[v] = from;
            for &u in &adj[v] {
                if u == from {
                    continue;
                }
                if visited[u] {
                    return false;
                }
                stack.push((u, v));
            }
        }
    }
    true
}

fn epsilon_noise_level(w: &Dmc) -> Option<f64> {
    // The embedding is by label: input labeled l maps to the output labeled l.
    let mut eps: f64 = 0.0;
    for (x, label) in w.input_labels().iter().enumerate() {
        let y = w.output_labels().iter().position(|o| o == label)?;
        eps = eps.max(1.0 - w.w(x, y));
    }
    Some(eps)
}
