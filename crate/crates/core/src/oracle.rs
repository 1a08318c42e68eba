//! Decomposition oracles: classifiers that split conditions into finitely
//! many classes, each with a claimed bound on antichain size.
//!
//! Wire protocol for external oracles (one request per line):
//!
//! ```text
//! engine -> oracle   HELLO
//! oracle -> engine   CLASSES <N> <b_0> ... <b_{N-1}>
//! engine -> oracle   CLASSIFY <condition>
//! oracle -> engine   CLASS <i>
//! engine -> oracle   BYE
//! ```

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::condition::Condition;
use crate::sigma::signature;
use crate::tree::Caps;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("OracleViolation: class {index} out of range for {classes} classes")]
    OutOfRange { index: usize, classes: usize },
    #[error("OracleViolation: {condition} classified as {first} and later as {second}")]
    Inconsistent {
        condition: String,
        first: usize,
        second: usize,
    },
    #[error("OracleViolation: bad bounds: {0}")]
    BadBounds(String),
    #[error("OracleViolation: protocol: {0}")]
    Protocol(String),
    #[error("OracleViolation: io: {0}")]
    Io(String),
}

impl From<std::io::Error> for OracleError {
    fn from(e: std::io::Error) -> Self {
        OracleError::Io(e.to_string())
    }
}

/// A claimed decomposition of the conditions into `bounds().len()` classes,
/// class `i` allegedly containing no antichain of size `bounds()[i]`.
pub trait DecompositionOracle {
    fn bounds(&self) -> &[usize];

    fn classify(&mut self, f: &Condition) -> Result<usize, OracleError>;

    fn class_count(&self) -> usize {
        self.bounds().len()
    }
}

pub fn check_bounds(bounds: &[usize]) -> Result<(), OracleError> {
    if bounds.is_empty() {
        return Err(OracleError::BadBounds("at least one class is required".into()));
    }
    if let Some(b) = bounds.iter().find(|&&b| b < 2) {
        return Err(OracleError::BadBounds(format!("bound {b} is below 2")));
    }
    Ok(())
}

/// The classifiers shipped with the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    /// Every condition goes to class 0.
    Constant,
    /// `k(F) mod N`.
    SigK,
    /// `|F^d| mod N`.
    SigN,
    /// `|R(F)| mod N`.
    SigM,
    /// `(k + n + m) mod N`.
    SigSum,
    /// Pseudo-random but fixed per condition.
    Random(u64),
}

impl BuiltinKind {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "constant" => BuiltinKind::Constant,
            "sig-k" => BuiltinKind::SigK,
            "sig-n" => BuiltinKind::SigN,
            "sig-m" => BuiltinKind::SigM,
            "sig-sum" => BuiltinKind::SigSum,
            _ => BuiltinKind::Random(name.strip_prefix("random:")?.parse().ok()?),
        })
    }

    pub fn name(&self) -> String {
        match self {
            BuiltinKind::Constant => "constant".into(),
            BuiltinKind::SigK => "sig-k".into(),
            BuiltinKind::SigN => "sig-n".into(),
            BuiltinKind::SigM => "sig-m".into(),
            BuiltinKind::SigSum => "sig-sum".into(),
            BuiltinKind::Random(seed) => format!("random:{seed}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BuiltinOracle {
    kind: BuiltinKind,
    bounds: Vec<usize>,
}

impl BuiltinOracle {
    pub fn new(kind: BuiltinKind, bounds: Vec<usize>) -> Result<Self, OracleError> {
        check_bounds(&bounds)?;
        Ok(BuiltinOracle { kind, bounds })
    }

    pub fn kind(&self) -> &BuiltinKind {
        &self.kind
    }
}

// FNV-1a, so the random oracle does not depend on std's hasher seeds
fn fnv1a(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl DecompositionOracle for BuiltinOracle {
    fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    fn classify(&mut self, f: &Condition) -> Result<usize, OracleError> {
        let n = self.bounds.len() as u64;
        let v = match self.kind {
            BuiltinKind::Constant => 0,
            BuiltinKind::SigK => signature(f).k,
            BuiltinKind::SigN => signature(f).n as u64,
            BuiltinKind::SigM => signature(f).m as u64,
            BuiltinKind::SigSum => {
                let s = signature(f);
                s.k + s.n as u64 + s.m as u64
            }
            BuiltinKind::Random(seed) => fnv1a(seed, f.to_string().as_bytes()),
        };
        Ok((v % n) as usize)
    }
}

/// How long an oracle may take to exit after `BYE`.
const EXIT_GRACE: Duration = Duration::from_secs(2);

/// Talks to an oracle subprocess over its standard input and output.
pub struct ExternalOracle {
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
    bounds: Vec<usize>,
    closed: bool,
}

impl ExternalOracle {
    pub fn spawn(program: &str, args: &[String]) -> Result<Self, OracleError> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()?;
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        let mut oracle = ExternalOracle {
            child,
            stdin,
            stdout,
            bounds: Vec::new(),
            closed: false,
        };
        let reply = oracle.request("HELLO")?;
        let mut words = reply.split_whitespace();
        if words.next() != Some("CLASSES") {
            return Err(OracleError::Protocol(format!("expected CLASSES, got {reply:?}")));
        }
        let nums: Vec<usize> = words
            .map(|w| w.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| OracleError::Protocol(format!("bad CLASSES line {reply:?}")))?;
        match nums.split_first() {
            Some((&n, bounds)) if n == bounds.len() => oracle.bounds = bounds.to_vec(),
            _ => return Err(OracleError::Protocol(format!("bad CLASSES line {reply:?}"))),
        }
        check_bounds(&oracle.bounds)?;
        Ok(oracle)
    }

    fn request(&mut self, line: &str) -> Result<String, OracleError> {
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| OracleError::Protocol("oracle already closed".into()))?;
        writeln!(stdin, "{line}")?;
        stdin.flush()?;
        let mut reply = String::new();
        if self.stdout.read_line(&mut reply)? == 0 {
            return Err(OracleError::Protocol("oracle closed its output".into()));
        }
        Ok(reply.trim_end().to_string())
    }

    /// Sends `BYE` and waits for the process to exit successfully.
    pub fn close(mut self) -> Result<(), OracleError> {
        self.shutdown()
    }

    fn shutdown(&mut self) -> Result<(), OracleError> {
        if self.closed {
            return Ok(());
        }
        self.closed = true;
        // the oracle may already be gone after a protocol error
        if let Some(mut stdin) = self.stdin.take() {
            let _ = writeln!(stdin, "BYE").and_then(|_| stdin.flush());
        }
        let deadline = Instant::now() + EXIT_GRACE;
        let status = loop {
            if let Some(status) = self.child.try_wait()? {
                break status;
            }
            if Instant::now() >= deadline {
                let _ = self.child.kill();
                let _ = self.child.wait();
                return Err(OracleError::Protocol("oracle did not exit after BYE".into()));
            }
            std::thread::sleep(Duration::from_millis(5));
        };
        if !status.success() {
            return Err(OracleError::Protocol(format!("oracle exited with {status}")));
        }
        Ok(())
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        let _ = self.shutdown();
    }
}

impl DecompositionOracle for ExternalOracle {
    fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    fn classify(&mut self, f: &Condition) -> Result<usize, OracleError> {
        let reply = self.request(&format!("CLASSIFY {f}"))?;
        reply
            .strip_prefix("CLASS ")
            .and_then(|i| i.trim().parse().ok())
            .ok_or_else(|| OracleError::Protocol(format!("expected CLASS <i>, got {reply:?}")))
    }
}

/// Serves `oracle` over the wire protocol until `BYE` or end of input.
pub fn serve<O: DecompositionOracle, R: BufRead, W: Write>(
    oracle: &mut O,
    input: R,
    mut output: W,
) -> Result<(), OracleError> {
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line == "HELLO" {
            let bounds: Vec<String> = oracle.bounds().iter().map(|b| b.to_string()).collect();
            writeln!(output, "CLASSES {} {}", bounds.len(), bounds.join(" "))?;
        } else if let Some(text) = line.strip_prefix("CLASSIFY ") {
            let f = Condition::parse(text, &Caps::UNBOUNDED)
                .map_err(|e| OracleError::Protocol(format!("cannot read condition: {e}")))?;
            writeln!(output, "CLASS {}", oracle.classify(&f)?)?;
        } else if line == "BYE" {
            return Ok(());
        } else if !line.is_empty() {
            return Err(OracleError::Protocol(format!("unknown request {line:?}")));
        }
        output.flush()?;
    }
    Ok(())
}

/// Wraps an oracle, memoizing its answers and checking them.
///
/// Every answer is range-checked. [`CheckedOracle::reclassify`] bypasses the
/// memo and compares a fresh answer with the recorded one.
pub struct CheckedOracle<'a> {
    inner: &'a mut dyn DecompositionOracle,
    memo: HashMap<Condition, usize>,
    bounds: Vec<usize>,
    queries: usize,
}

impl<'a> CheckedOracle<'a> {
    pub fn new(inner: &'a mut dyn DecompositionOracle) -> Result<Self, OracleError> {
        let bounds = inner.bounds().to_vec();
        check_bounds(&bounds)?;
        Ok(CheckedOracle {
            inner,
            memo: HashMap::new(),
            bounds,
            queries: 0,
        })
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn class_count(&self) -> usize {
        self.bounds.len()
    }

    /// Number of questions put to the wrapped oracle.
    pub fn queries(&self) -> usize {
        self.queries
    }

    fn ask(&mut self, f: &Condition) -> Result<usize, OracleError> {
        self.queries += 1;
        let index = self.inner.classify(f)?;
        if index >= self.bounds.len() {
            return Err(OracleError::OutOfRange {
                index,
                classes: self.bounds.len(),
            });
        }
        Ok(index)
    }

    pub fn classify(&mut self, f: &Condition) -> Result<usize, OracleError> {
        if let Some(&i) = self.memo.get(f) {
            return Ok(i);
        }
        let i = self.ask(f)?;
        self.memo.insert(f.clone(), i);
        Ok(i)
    }

    /// Asks again, without the memo, and insists on the recorded answer.
    pub fn reclassify(&mut self, f: &Condition) -> Result<usize, OracleError> {
        let fresh = self.ask(f)?;
        match self.memo.insert(f.clone(), fresh) {
            Some(first) if first != fresh => Err(OracleError::Inconsistent {
                condition: f.to_string(),
                first,
                second: fresh,
            }),
            _ => Ok(fresh),
        }
    }
}
