use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest alphabet with a single-character rendering (`0-9a-z`).
pub const MAX_Q: u32 = 36;

/// A word over `{0, .., q-1}`; for `q = 2` letters render as `H`/`T`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: u32,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(q: u32, letters: Vec<u8>) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidGame(format!("alphabet size {q} outside 2..={MAX_Q}")));
        }
        if letters.is_empty() || letters.iter().any(|&x| u32::from(x) >= q) {
            return Err(Error::InvalidWord { word: format!("{letters:?}"), q });
        }
        Ok(Word { q, letters })
    }

    /// `H`/`T` (or `0`/`1`) for `q = 2`; `0-9a-z` otherwise.
    pub fn parse(q: u32, text: &str) -> Result<Self> {
        let bad = || Error::InvalidWord { word: text.to_string(), q };
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidGame(format!("alphabet size {q} outside 2..={MAX_Q}")));
        }
        let letters = text
            .chars()
            .map(|c| {
                let v = match (q, c.to_ascii_uppercase()) {
                    (2, 'H') => 0,
                    (2, 'T') => 1,
                    _ => c.to_digit(36).ok_or_else(bad)?,
                };
                if v < q {
                    Ok(v as u8)
                } else {
                    Err(bad())
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        if letters.is_empty() {
            return Err(bad());
        }
        Ok(Word { q, letters })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Base-`q` index with the first letter most significant.
    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, &x| acc * self.q as usize + x as usize)
    }

    pub fn from_index(q: u32, len: usize, mut idx: usize) -> Self {
        let mut letters = vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (idx % q as usize) as u8;
            idx /= q as usize;
        }
        Word { q, letters }
    }

    /// All `q^len` words in lexicographic order.
    pub fn all(q: u32, len: usize) -> impl Iterator<Item = Word> {
        let count = (q as usize).pow(len as u32);
        (0..count).map(move |i| Word::from_index(q, len, i))
    }

    pub fn relabel(&self, perm: &[u8]) -> Word {
        Word { q: self.q, letters: self.letters.iter().map(|&x| perm[x as usize]).collect() }
    }

    pub fn reversed(&self) -> Word {
        Word { q: self.q, letters: self.letters.iter().rev().copied().collect() }
    }

    pub fn render_letter(q: u32, x: u8) -> char {
        match (q, x) {
            (2, 0) => 'H',
            (2, 1) => 'T',
            _ => std::char::from_digit(u32::from(x), 36).expect("letter below 36"),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|&x| write!(f, "{}", Word::render_letter(self.q, x)))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let w = Word::parse(2, "hTh").unwrap();
        assert_eq!(w.letters(), &[0, 1, 0]);
        assert_eq!(w.to_string(), "HTH");
        assert_eq!(Word::parse(2, "010").unwrap(), w);
        assert_eq!(Word::parse(3, "012").unwrap().to_string(), "012");
        assert_eq!(Word::parse(12, "ab").unwrap().letters(), &[10, 11]);
    }

    #[test]
    fn parse_rejects() {
        assert!(matches!(Word::parse(2, "HX"), Err(Error::InvalidWord { .. })));
        assert!(matches!(Word::parse(3, "3"), Err(Error::InvalidWord { .. })));
        assert!(matches!(Word::parse(2, ""), Err(Error::InvalidWord { .. })));
        assert!(matches!(Word::parse(1, "0"), Err(Error::InvalidGame(_))));
        assert!(matches!(Word::parse(37, "0"), Err(Error::InvalidGame(_))));
    }

    #[test]
    fn index_round_trip() {
        for w in Word::all(3, 3) {
            assert_eq!(Word::from_index(3, 3, w.index()), w);
        }
        assert_eq!(Word::all(2, 2).map(|w| w.to_string()).collect::<Vec<_>>(), ["HH", "HT", "TH", "TT"]);
    }
}
