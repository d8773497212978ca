//! The fixed 64-symbol character set that every field value is normalized to.
//!
//! Default roster, in index order:
//!
//! | indices | symbols |
//! |---------|---------|
//! | 0–25    | `A`–`Z` |
//! | 26–35   | `0`–`9` |
//! | 36–44   | `.` `,` `:` `;` `/` `\` `"` `'` `` ` `` |
//! | 45–52   | `[` `]` `{` `}` `<` `>` `(` `)` |
//! | 53–61   | `+` `-` `!` `?` `$` `%` `&` `*` `_` |
//! | 62      | space |
//! | 63      | `#` (placeholder) |
//!
//! Anything outside the roster (after ASCII upper-casing) becomes the
//! placeholder, so normalization never changes the length of a string.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Number of symbols in every alphabet.
pub const ALPHABET_SIZE: usize = 64;

/// Punctuation, space and placeholder that follow the letters and digits.
pub const DEFAULT_PUNCTUATION: &str = ".,:;/\\\"'`[]{}<>()+-!?$%&*_ ";

pub const DEFAULT_PLACEHOLDER: char = '#';

const ABSENT: u8 = u8::MAX;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "AlphabetRepr", into = "AlphabetRepr")]
pub struct Alphabet {
    symbols: Vec<char>,
    placeholder: char,
    ascii_index: [u8; 128],
}

#[derive(Serialize, Deserialize)]
struct AlphabetRepr {
    symbols: String,
    placeholder: char,
}

impl TryFrom<AlphabetRepr> for Alphabet {
    type Error = Error;

    fn try_from(r: AlphabetRepr) -> Result<Self> {
        if r.symbols.chars().count() == ALPHABET_SIZE {
            Alphabet::new(&r.symbols, r.placeholder)
        } else {
            Alphabet::compact(&r.symbols, r.placeholder)
        }
    }
}

impl From<Alphabet> for AlphabetRepr {
    fn from(a: Alphabet) -> Self {
        AlphabetRepr {
            symbols: a.symbols.iter().collect(),
            placeholder: a.placeholder,
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols && self.placeholder == other.placeholder
    }
}

impl Eq for Alphabet {}

impl Default for Alphabet {
    fn default() -> Self {
        let mut symbols: String = ('A'..='Z').chain('0'..='9').collect();
        symbols.push_str(DEFAULT_PUNCTUATION);
        symbols.push(DEFAULT_PLACEHOLDER);
        Alphabet::new(&symbols, DEFAULT_PLACEHOLDER).expect("default roster is valid")
    }
}

impl Alphabet {
    /// Builds an alphabet from an explicit roster.
    ///
    /// The roster must hold exactly 64 distinct characters including `A`–`Z`,
    /// `0`–`9` and the placeholder.
    pub fn new(symbols: &str, placeholder: char) -> Result<Self> {
        let n = symbols.chars().count();
        if n != ALPHABET_SIZE {
            return Err(Error::InvalidAlphabet(format!("expected {ALPHABET_SIZE} symbols, got {n}")));
        }
        if let Some(c) = ('A'..='Z').chain('0'..='9').find(|&c| !symbols.contains(c)) {
            return Err(Error::InvalidAlphabet(format!("missing required symbol {c:?}")));
        }
        Self::build(symbols, placeholder)
    }

    /// A small alphabet for analysis: 1 to 64 distinct characters, one of
    /// them the placeholder. Models fitted with it use its size as |A|.
    /// Tables loaded from files always use a full 64-symbol roster.
    pub fn compact(symbols: &str, placeholder: char) -> Result<Self> {
        let n = symbols.chars().count();
        if n == 0 || n > ALPHABET_SIZE {
            return Err(Error::InvalidAlphabet(format!(
                "expected 1 to {ALPHABET_SIZE} symbols, got {n}"
            )));
        }
        Self::build(symbols, placeholder)
    }

    fn build(symbols: &str, placeholder: char) -> Result<Self> {
        let symbols: Vec<char> = symbols.chars().collect();
        let mut ascii_index = [ABSENT; 128];
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
            if c.is_ascii() {
                ascii_index[c as usize] = i as u8;
            }
        }
        if !symbols.contains(&placeholder) {
            return Err(Error::InvalidAlphabet(format!(
                "placeholder {placeholder:?} is not in the roster"
            )));
        }
        Ok(Alphabet {
            symbols,
            placeholder,
            ascii_index,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn placeholder(&self) -> char {
        self.placeholder
    }

    /// Position of `c` in the roster.
    #[inline]
    pub fn index_of(&self, c: char) -> Option<usize> {
        if c.is_ascii() {
            match self.ascii_index[c as usize] {
                ABSENT => None,
                i => Some(i as usize),
            }
        } else {
            self.symbols.iter().position(|&s| s == c)
        }
    }

    #[inline]
    pub fn contains(&self, c: char) -> bool {
        self.index_of(c).is_some()
    }

    #[inline]
    pub fn normalize_char(&self, c: char) -> char {
        let up = c.to_ascii_uppercase();
        if self.contains(up) {
            up
        } else {
            self.placeholder
        }
    }

    /// Upper-cases ASCII letters and maps every character outside the roster
    /// to the placeholder. The character count is preserved.
    pub fn normalize(&self, raw: &str) -> String {
        raw.chars().map(|c| self.normalize_char(c)).collect()
    }

    pub fn is_normalized(&self, s: &str) -> bool {
        s.chars().all(|c| self.contains(c))
    }
}

/// [`Alphabet::normalize`] on the default roster.
pub fn normalize_string(raw: &str) -> String {
    thread_local! {
        static DEFAULT: Alphabet = Alphabet::default();
    }
    DEFAULT.with(|a| a.normalize(raw))
}
