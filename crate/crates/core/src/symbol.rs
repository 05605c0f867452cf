use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// A letter of a finite alphabet.
///
/// Symbols are cheap to clone and compare. Two symbols are distinguished:
/// the blank symbol, written `_`, marks a missing subtree, and the hash
/// symbol `#` marks auxiliary nodes that are erased by projection.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub const BLANK_TEXT: &'static str = "_";
    pub const HASH_TEXT: &'static str = "#";

    pub fn new(text: impl AsRef<str>) -> Self {
        Symbol(Arc::from(text.as_ref()))
    }

    pub fn blank() -> Self {
        Symbol::new(Self::BLANK_TEXT)
    }

    pub fn hash() -> Self {
        Symbol::new(Self::HASH_TEXT)
    }

    pub fn is_blank(&self) -> bool {
        &*self.0 == Self::BLANK_TEXT
    }

    pub fn is_hash(&self) -> bool {
        &*self.0 == Self::HASH_TEXT
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "'{}'", self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

/// A direction in a binary tree or a choice between the two ordered
/// successors of a game vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left = 0,
    Right = 1,
}

impl Dir {
    pub const BOTH: [Dir; 2] = [Dir::Left, Dir::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn other(self) -> Dir {
        match self {
            Dir::Left => Dir::Right,
            Dir::Right => Dir::Left,
        }
    }

    pub fn from_index(i: usize) -> Option<Dir> {
        match i {
            0 => Some(Dir::Left),
            1 => Some(Dir::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A node address: a finite word over {0, 1}, read from the root.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(Vec<Dir>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn from_dirs(dirs: Vec<Dir>) -> Self {
        Address(dirs)
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, d: Dir) -> Address {
        let mut v = self.0.clone();
        v.push(d);
        Address(v)
    }

    pub fn parent(&self) -> Option<Address> {
        if self.0.is_empty() {
            None
        } else {
            Some(Address(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn push(&mut self, d: Dir) {
        self.0.push(d);
    }

    pub fn extend_from(&mut self, dirs: &[Dir]) {
        self.0.extend_from_slice(dirs);
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid address `{0}`: expected a word over 0/1, or `e` for the root")]
pub struct AddressParseError(pub String);

impl FromStr for Address {
    type Err = AddressParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(Address::root());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(Dir::Left),
                '1' => Ok(Dir::Right),
                _ => Err(AddressParseError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Address)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn address_parse_and_display() {
        let a: Address = "0110".parse().unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a.to_string(), "0110");
        assert_eq!("e".parse::<Address>().unwrap(), Address::root());
        assert!("012".parse::<Address>().is_err());
    }

    #[test]
    fn distinguished_symbols() {
        assert!(Symbol::blank().is_blank());
        assert!(Symbol::hash().is_hash());
        assert!(!Symbol::new("a").is_blank());
    }
}
