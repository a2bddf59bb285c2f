//! Block codebooks, feedback strategies, and the decoding lists they induce.
//!
//! A `Codebook` fixes one input block per message; a `FeedbackStrategy`
//! chooses each input from the message and the outputs received so far, and
//! stores the choices as explicit per-depth tables. Both evaluate message
//! likelihoods through the memoryless product law, and `list_sets` turns the
//! likelihoods of one received block into the erasure list `L(y)` and the
//! at-least-as-likely list `L(m, y)`.

use crate::channel::Dmc;
use crate::SolveError;

/// Total prefix-table entries allowed per message in a feedback strategy.
///
/// Equals sum_i |Y|^(i-1) for i = 1..=n, so for a binary output alphabet the
/// cap admits blocklengths up to 12.
const PREFIX_CAP: u128 = 4095;

/// Total table entries allowed across all messages of a feedback strategy.
const TABLE_CAP: u128 = 10_000_000;

/// Block code: a fixed list of codewords over the channel input alphabet.
///
/// Codewords are stored as input indices and need not be distinct; the
/// message set is `0..num_messages()` and message `m` is encoded as
/// `codeword(m)` regardless of the channel outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    num_inputs: usize,
    codewords: Vec<Vec<usize>>,
}

impl Codebook {
    /// Validates and wraps a codeword list: at least one codeword, equal
    /// positive lengths, and every symbol a valid input index.
    pub fn new(codewords: Vec<Vec<usize>>, num_inputs: usize) -> Result<Self, SolveError> {
        if codewords.is_empty() {
            return Err(SolveError::InvalidArgument(
                "codebook needs at least one codeword".into(),
            ));
        }
        let n = codewords[0].len();
        if n == 0 {
            return Err(SolveError::InvalidArgument(
                "codewords must have positive length".into(),
            ));
        }
        for cw in &codewords {
            if cw.len() != n {
                return Err(SolveError::InvalidArgument(format!(
                    "codeword length {} differs from blocklength {}",
                    cw.len(),
                    n
                )));
            }
            if let Some(&bad) = cw.iter().find(|&&x| x >= num_inputs) {
                return Err(SolveError::InvalidArgument(format!(
                    "input index {bad} outside alphabet of size {num_inputs}"
                )));
            }
        }
        Ok(Self {
            n,
            num_inputs,
            codewords,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_messages(&self) -> usize {
        self.codewords.len()
    }

    /// Code rate `ln(M) / n` in nats per channel use.
    pub fn rate(&self) -> f64 {
        (self.num_messages() as f64).ln() / self.n as f64
    }

    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    pub fn codeword(&self, m: usize) -> &[usize] {
        &self.codewords[m]
    }

    /// Probability that codeword `m` produces the output block `y`.
    pub fn likelihood(&self, w: &Dmc, m: usize, y: &[usize]) -> f64 {
        assert_eq!(y.len(), self.n, "output block length mismatch");
        self.codewords[m]
            .iter()
            .zip(y)
            .map(|(&x, &yi)| w.w(x, yi))
            .product()
    }

    /// Serializes to the plain-text interchange format: a header with the
    /// blocklength and input-alphabet size, then one codeword per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\ninputs {}\n", self.n, self.num_inputs);
        for cw in &self.codewords {
            let row: Vec<String> = cw.iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`Codebook::to_text`].
    pub fn from_text(text: &str) -> Result<Self, SolveError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n = parse_header(lines.next(), "n")?;
        let num_inputs = parse_header(lines.next(), "inputs")?;
        let mut codewords = Vec::new();
        for line in lines {
            let cw = parse_index_row(line)?;
            if cw.len() != n {
                return Err(SolveError::InvalidArgument(format!(
                    "row of length {} under header n {}",
                    cw.len(),
                    n
                )));
            }
            codewords.push(cw);
        }
        Self::new(codewords, num_inputs)
    }
}

/// Feedback encoder: the input at each time is a function of the message and
/// the output prefix received so far, stored as one table per depth.
///
/// `tables[i]` has one entry per `(message, output prefix of length i)` pair,
/// indexed as `m * |Y|^i + prefix_index` with the prefix read big-endian.
/// The representation is exponential in the blocklength, which is acceptable
/// because exact moment evaluation already enumerates `|Y|^n` outputs; the
/// constructor enforces the size caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackStrategy {
    n: usize,
    num_messages: usize,
    num_inputs: usize,
    num_outputs: usize,
    tables: Vec<Vec<usize>>,
}

impl FeedbackStrategy {
    /// Builds the per-depth tables by evaluating `f(message, prefix)` on
    /// every reachable prefix.
    pub fn from_fn<F>(
        n: usize,
        num_messages: usize,
        num_inputs: usize,
        num_outputs: usize,
        mut f: F,
    ) -> Result<Self, SolveError>
    where
        F: FnMut(usize, &[usize]) -> usize,
    {
        if n == 0 || num_messages == 0 || num_inputs == 0 || num_outputs == 0 {
            return Err(SolveError::InvalidArgument(
                "feedback strategy dimensions must be positive".into(),
            ));
        }
        check_table_size(n, num_messages, num_outputs)?;
        let mut tables = Vec::with_capacity(n);
        let mut prefix = vec![0usize; n];
        for depth in 0..n {
            let prefixes = num_outputs.pow(depth as u32);
            let mut table = vec![0usize; num_messages * prefixes];
            for m in 0..num_messages {
                for pi in 0..prefixes {
                    decode_prefix(pi, num_outputs, &mut prefix[..depth]);
                    let x = f(m, &prefix[..depth]);
                    if x >= num_inputs {
                        return Err(SolveError::InvalidArgument(format!(
                            "strategy returned input {x} outside alphabet of size {num_inputs}"
                        )));
                    }
                    table[m * prefixes + pi] = x;
                }
            }
            tables.push(table);
        }
        Ok(Self {
            n,
            num_messages,
            num_inputs,
            num_outputs,
            tables,
        })
    }

    /// Wraps a codebook as the feedback strategy that ignores the feedback.
    pub fn from_codebook(book: &Codebook, num_outputs: usize) -> Result<Self, SolveError> {
        Self::from_fn(
            book.n(),
            book.num_messages(),
            book.num_inputs(),
            num_outputs,
            |m, prefix| book.codeword(m)[prefix.len()],
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_messages(&self) -> usize {
        self.num_messages
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    /// Input sent for message `m` after receiving `prefix`.
    pub fn input(&self, m: usize, prefix: &[usize]) -> usize {
        let depth = prefix.len();
        assert!(depth < self.n, "prefix length must be below blocklength");
        let pi = prefix_index(prefix, self.num_outputs);
        self.tables[depth][m * self.num_outputs.pow(depth as u32) + pi]
    }

    /// Probability of the output block `y` for message `m` under the
    /// per-prefix product law: each factor conditions on the input chosen
    /// from the prefix received before it.
    pub fn likelihood(&self, w: &Dmc, m: usize, y: &[usize]) -> f64 {
        assert_eq!(y.len(), self.n, "output block length mismatch");
        let mut p = 1.0;
        for i in 0..self.n {
            let x = self.input(m, &y[..i]);
            p *= w.w(x, y[i]);
            if p == 0.0 {
                return 0.0;
            }
        }
        p
    }

    /// Serializes to the plain-text interchange format: a header, then for
    /// each depth a `depth` marker followed by one line per message holding
    /// that message's inputs over all prefixes of the depth.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n {}\ninputs {}\noutputs {}\nmessages {}\n",
            self.n, self.num_inputs, self.num_outputs, self.num_messages
        );
        for (depth, table) in self.tables.iter().enumerate() {
            out.push_str(&format!("depth {depth}\n"));
            let prefixes = self.num_outputs.pow(depth as u32);
            for m in 0..self.num_messages {
                let row: Vec<String> = table[m * prefixes..(m + 1) * prefixes]
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }

    /// Parses the format written by [`FeedbackStrategy::to_text`].
    pub fn from_text(text: &str) -> Result<Self, SolveError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n = parse_header(lines.next(), "n")?;
        let num_inputs = parse_header(lines.next(), "inputs")?;
        let num_outputs = parse_header(lines.next(), "outputs")?;
        let num_messages = parse_header(lines.next(), "messages")?;
        if n == 0 || num_messages == 0 || num_inputs == 0 || num_outputs == 0 {
            return Err(SolveError::InvalidArgument(
                "feedback strategy dimensions must be positive".into(),
            ));
        }
        check_table_size(n, num_messages, num_outputs)?;
        let mut tables = Vec::with_capacity(n);
        for depth in 0..n {
            let marker = parse_header(lines.next(), "depth")?;
            if marker != depth {
                return Err(SolveError::InvalidArgument(format!(
                    "expected depth {depth}, found {marker}"
                )));
            }
            let prefixes = num_outputs.pow(depth as u32);
            let mut table = Vec::with_capacity(num_messages * prefixes);
            for _ in 0..num_messages {
                let row = parse_index_row(lines.next().ok_or_else(|| {
                    SolveError::InvalidArgument("truncated strategy table".into())
                })?)?;
                if row.len() != prefixes {
                    return Err(SolveError::InvalidArgument(format!(
                        "depth {depth} row has {} entries, expected {prefixes}",
                        row.len()
                    )));
                }
                if let Some(&bad) = row.iter().find(|&&x| x >= num_inputs) {
                    return Err(SolveError::InvalidArgument(format!(
                        "input index {bad} outside alphabet of size {num_inputs}"
                    )));
                }
                table.extend(row);
            }
            tables.push(table);
        }
        Ok(Self {
            n,
            num_messages,
            num_inputs,
            num_outputs,
            tables,
        })
    }
}

/// A code of either kind, presenting the shared likelihood interface.
#[derive(Clone, Debug)]
pub enum Code {
    Block(Codebook),
    Feedback(FeedbackStrategy),
}

impl Code {
    pub fn n(&self) -> usize {
        match self {
            Code::Block(b) => b.n(),
            Code::Feedback(s) => s.n(),
        }
    }

    pub fn num_messages(&self) -> usize {
        match self {
            Code::Block(b) => b.num_messages(),
            Code::Feedback(s) => s.num_messages(),
        }
    }

    pub fn num_inputs(&self) -> usize {
        match self {
            Code::Block(b) => b.num_inputs(),
            Code::Feedback(s) => s.num_inputs(),
        }
    }

    /// Probability that message `m` produces the output block `y`.
    pub fn likelihood(&self, w: &Dmc, m: usize, y: &[usize]) -> f64 {
        match self {
            Code::Block(b) => b.likelihood(w, m, y),
            Code::Feedback(s) => s.likelihood(w, m, y),
        }
    }
}

impl From<Codebook> for Code {
    fn from(b: Codebook) -> Self {
        Code::Block(b)
    }
}

impl From<FeedbackStrategy> for Code {
    fn from(s: FeedbackStrategy) -> Self {
        Code::Feedback(s)
    }
}

/// The two decoding lists for a received block, both ascending in message
/// index.
///
/// `L(y)` holds every message with positive likelihood of producing `y`.
/// `L(m, y)` holds every message at least as likely as message `m`, ties
/// included; when message `m` itself has likelihood zero the comparison
/// `>= 0` keeps all messages, which is the correct degenerate reading (an
/// impossible observation rules out nothing relative to `m`). Whenever
/// message `m` has positive likelihood, every member of `L(m, y)` does too,
/// and then `L(m, y)` is a subset of `L(y)`.
///
/// Panics if `m` or a symbol of `y` is out of range, or if the code and
/// channel alphabets disagree.
pub fn list_sets(w: &Dmc, code: &Code, y: &[usize], m: usize) -> (Vec<usize>, Vec<usize>) {
    assert!(m < code.num_messages(), "message index out of range");
    assert!(
        code.num_inputs() <= w.num_inputs(),
        "code uses inputs outside the channel alphabet"
    );
    assert!(
        y.iter().all(|&yi| yi < w.num_outputs()),
        "output index out of range"
    );
    let lik: Vec<f64> = (0..code.num_messages())
        .map(|mp| code.likelihood(w, mp, y))
        .collect();
    let erasure_list: Vec<usize> = (0..lik.len()).filter(|&mp| lik[mp] > 0.0).collect();
    let threshold = lik[m];
    let cutoff_list: Vec<usize> = (0..lik.len()).filter(|&mp| lik[mp] >= threshold).collect();
    (erasure_list, cutoff_list)
}

/// Big-endian index of an output prefix in `0..ny^len`.
fn prefix_index(prefix: &[usize], ny: usize) -> usize {
    prefix.iter().fold(0, |acc, &y| acc * ny + y)
}

/// Inverse of [`prefix_index`]: writes the digits of `index` into `out`.
fn decode_prefix(mut index: usize, ny: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % ny;
        index /= ny;
    }
}

fn check_table_size(n: usize, num_messages: usize, num_outputs: usize) -> Result<(), SolveError> {
    let mut per_message: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..n {
        per_message += level;
        level = level.saturating_mul(num_outputs as u128);
        if per_message > PREFIX_CAP {
            return Err(SolveError::SizeCap {
                size: per_message,
                cap: PREFIX_CAP,
            });
        }
    }
    let total = per_message * num_messages as u128;
    if total > TABLE_CAP {
        return Err(SolveError::SizeCap {
            size: total,
            cap: TABLE_CAP,
        });
    }
    Ok(())
}

fn parse_header(line: Option<&str>, key: &str) -> Result<usize, SolveError> {
    let line =
        line.ok_or_else(|| SolveError::InvalidArgument(format!("missing `{key}` header")))?;
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v.parse().map_err(|_| {
            SolveError::InvalidArgument(format!("invalid `{key}` value: {v}"))
        }),
        _ => Err(SolveError::InvalidArgument(format!(
            "expected `{key} <count>`, found `{line}`"
        ))),
    }
}

fn parse_index_row(line: &str) -> Result<Vec<usize>, SolveError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| SolveError::InvalidArgument(format!("invalid symbol index: {tok}")))
        })
        .collect()
}
