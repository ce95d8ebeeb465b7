use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Prefix reserved for the fresh values introduced by the representative
/// database construction. User data may not use it.
pub const NULL_PREFIX: char = '#';

/// A value from the (totally ordered) constant domain.
///
/// Two constants are equal iff their lexemes are identical. Ordering puts
/// integer lexemes first, in numeric order, and everything else after them in
/// lexicographic order; numerically equal integers with different spellings
/// (`7`, `007`) are ordered by lexeme so the order stays total. Nulls come
/// last, by number.
#[derive(Clone)]
pub struct Constant {
    lexeme: Arc<str>,
    int: Option<i128>,
}

impl Constant {
    pub fn new(lexeme: impl AsRef<str>) -> Self {
        let lexeme: Arc<str> = Arc::from(lexeme.as_ref());
        let int = parse_integer(&lexeme);
        Constant { lexeme, int }
    }

    /// Fresh value `#e<n>` used for the nulls of the representative database.
    pub fn null(n: usize) -> Self {
        Constant::new(format!("{NULL_PREFIX}e{n}"))
    }

    pub fn as_str(&self) -> &str {
        &self.lexeme
    }

    pub fn is_null(&self) -> bool {
        self.lexeme.starts_with(NULL_PREFIX)
    }

    pub fn as_integer(&self) -> Option<i128> {
        self.int
    }

    /// True when the lexeme can be written without quotes in every surface
    /// syntax we emit (facts, queries, ASP programs).
    pub fn is_bare(&self) -> bool {
        if self.int.is_some() {
            return !self.lexeme.starts_with('+');
        }
        let mut chars = self.lexeme.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
            _ => false,
        }
    }
}

fn parse_integer(s: &str) -> Option<i128> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl PartialEq for Constant {
    fn eq(&self, other: &Self) -> bool {
        self.lexeme == other.lexeme
    }
}

impl Eq for Constant {}

impl Hash for Constant {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.lexeme.hash(state)
    }
}

impl Constant {
    fn null_index(&self) -> Option<u64> {
        self.lexeme.strip_prefix(NULL_PREFIX)?.strip_prefix('e')?.parse().ok()
    }
}

impl Ord for Constant {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_null(), other.is_null()) {
            (true, true) => {
                return self.null_index().cmp(&other.null_index()).then_with(|| self.lexeme.cmp(&other.lexeme))
            }
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            (false, false) => {}
        }
        match (self.int, other.int) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.lexeme.cmp(&other.lexeme)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.lexeme.cmp(&other.lexeme),
        }
    }
}

impl PartialOrd for Constant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Bare lexeme when possible, otherwise a single-quoted string with `\'` and
/// `\\` escapes. Nulls print as-is.
impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bare() || self.is_null() {
            f.write_str(&self.lexeme)
        } else {
            f.write_str("'")?;
            for c in self.lexeme.chars() {
                match c {
                    '\'' => f.write_str("\\'")?,
                    '\\' => f.write_str("\\\\")?,
                    c => write!(f, "{c}")?,
                }
            }
            f.write_str("'")
        }
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant::new(s)
    }
}

pub type Tuple = Vec<Constant>;

/// Convenience constructor for tuples in tests and examples.
pub fn tuple<S: AsRef<str>>(values: &[S]) -> Tuple {
    values.iter().map(Constant::new).collect()
}
