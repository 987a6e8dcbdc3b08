//! Strings to binary entities, and wildcard terms to oracle expressions.
//!
//! Every character maps to a fixed-width binary segment; a string's entity
//! is the concatenation of its segments. Bit `j` of an entity is variable
//! `x{j}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolexpr::BoolExpr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("empty string cannot be encoded")]
    EmptyString,
    #[error("character {0:?} is not in the alphabet")]
    UnknownChar(char),
    #[error("codec codes must all have width {expected}, {ch:?} has {got}")]
    NonUniformWidth { ch: char, expected: usize, got: usize },
    #[error("codes must be non-empty bit strings, {0:?} is not")]
    BadCode(String),
    #[error("characters {0:?} and {1:?} share code {2}")]
    DuplicateCode(char, char, String),
    #[error("codec width {0} disagrees with its codes")]
    WidthMismatch(usize),
    #[error("bit string of length {len} is not a multiple of segment width {width}")]
    Misaligned { len: usize, width: usize },
    #[error("segment {0} is not assigned to any character")]
    UnassignedCode(String),
    #[error("dataset strings differ in length: {0:?} has {1} characters, expected {2}")]
    UnequalLengths(String, usize, usize),
    #[error("search term {0:?} has {1} characters, longer than the {2}-character entities")]
    TermTooLong(String, usize, usize),
    #[error("exact term {0:?} has {1} characters, entities have {2}")]
    ExactLength(String, usize, usize),
    #[error("invalid search term {0:?}: {1}")]
    BadTerm(String, &'static str),
    #[error("oracle expression needs at least one {0}")]
    EmptyJoin(&'static str),
    #[error("codec file: {0}")]
    CodecFile(String),
}

/// Bijective map between characters and fixed-width bit strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetCodec {
    symbols: Vec<char>,
    width: usize,
    code: BTreeMap<char, String>,
    decode: BTreeMap<String, char>,
}

/// On-disk codec layout: `{"width": 2, "code": {"a": "00", ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodecFile {
    pub width: usize,
    pub code: BTreeMap<char, String>,
}

impl AlphabetCodec {
    /// Validates an explicit character map.
    pub fn from_map(code: BTreeMap<char, String>) -> Result<Self, EncodingError> {
        let width = code
            .values()
            .next()
            .map(|c| c.chars().count())
            .ok_or(EncodingError::EmptyDataset)?;
        let mut decode: BTreeMap<String, char> = BTreeMap::new();
        for (&ch, bits) in &code {
            if bits.is_empty() || !bits.chars().all(|b| b == '0' || b == '1') {
                return Err(EncodingError::BadCode(bits.clone()));
            }
            if bits.len() != width {
                return Err(EncodingError::NonUniformWidth {
                    ch,
                    expected: width,
                    got: bits.len(),
                });
            }
            if let Some(&other) = decode.get(bits) {
                return Err(EncodingError::DuplicateCode(other, ch, bits.clone()));
            }
            decode.insert(bits.clone(), ch);
        }
        Ok(AlphabetCodec {
            symbols: code.keys().copied().collect(),
            width,
            code,
            decode,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, EncodingError> {
        let file: CodecFile =
            serde_json::from_str(text).map_err(|e| EncodingError::CodecFile(e.to_string()))?;
        let codec = Self::from_map(file.code)?;
        if codec.width != file.width {
            return Err(EncodingError::WidthMismatch(file.width));
        }
        Ok(codec)
    }

    pub fn to_file(&self) -> CodecFile {
        CodecFile {
            width: self.width,
            code: self.code.clone(),
        }
    }

    /// Characters in sorted order.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn code_of(&self, ch: char) -> Option<&str> {
        self.code.get(&ch).map(String::as_str)
    }
}

/// Sorted-order codec at width `max(1, ceil(log2 |alphabet|))`, or the
/// explicit map when one is given.
pub fn build_codec(
    dataset: &[String],
    explicit: Option<BTreeMap<char, String>>,
) -> Result<AlphabetCodec, EncodingError> {
    if dataset.is_empty() {
        return Err(EncodingError::EmptyDataset);
    }
    if let Some(map) = explicit {
        return AlphabetCodec::from_map(map);
    }
    let alphabet: BTreeSet<char> = dataset.iter().flat_map(|s| s.chars()).collect();
    if alphabet.is_empty() {
        return Err(EncodingError::EmptyString);
    }
    let width = (usize::BITS - (alphabet.len() - 1).leading_zeros()).max(1) as usize;
    let code = alphabet
        .iter()
        .enumerate()
        .map(|(i, &ch)| (ch, format!("{i:0width$b}")))
        .collect();
    AlphabetCodec::from_map(code)
}

/// A string's concatenated binary segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryEntity {
    bits: String,
    segment_width: usize,
}

impl BinaryEntity {
    pub fn new(bits: impl Into<String>, segment_width: usize) -> Result<Self, EncodingError> {
        let bits = bits.into();
        if bits.is_empty() {
            return Err(EncodingError::EmptyString);
        }
        if !bits.chars().all(|b| b == '0' || b == '1') {
            return Err(EncodingError::BadCode(bits));
        }
        if segment_width == 0 || bits.len() % segment_width != 0 {
            return Err(EncodingError::Misaligned {
                len: bits.len(),
                width: segment_width,
            });
        }
        Ok(BinaryEntity {
            bits,
            segment_width,
        })
    }

    pub fn bits(&self) -> &str {
        &self.bits
    }

    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    /// Basis-state index with bit 0 as the most significant bit.
    pub fn index(&self) -> usize {
        self.bits
            .bytes()
            .fold(0, |acc, b| (acc << 1) | usize::from(b == b'1'))
    }

    /// Conjunction satisfied only by this entity.
    pub fn exact_expr(&self) -> BoolExpr {
        literals_at(0, &self.bits)
    }
}

impl fmt::Display for BinaryEntity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits)
    }
}

pub fn encode_string(codec: &AlphabetCodec, s: &str) -> Result<BinaryEntity, EncodingError> {
    if s.is_empty() {
        return Err(EncodingError::EmptyString);
    }
    let mut bits = String::with_capacity(s.len() * codec.width);
    for ch in s.chars() {
        bits.push_str(codec.code_of(ch).ok_or(EncodingError::UnknownChar(ch))?);
    }
    BinaryEntity::new(bits, codec.width)
}

pub fn decode_entity(codec: &AlphabetCodec, e: &BinaryEntity) -> Result<String, EncodingError> {
    decode_bits(codec, e.bits())
}

/// Segment-wise decode of a raw bit string.
pub fn decode_bits(codec: &AlphabetCodec, bits: &str) -> Result<String, EncodingError> {
    if bits.is_empty() {
        return Err(EncodingError::EmptyString);
    }
    if !bits.len().is_multiple_of(codec.width) || !bits.is_ascii() {
        return Err(EncodingError::Misaligned {
            len: bits.len(),
            width: codec.width,
        });
    }
    (0..bits.len())
        .step_by(codec.width)
        .map(|i| {
            let seg = &bits[i..i + codec.width];
            codec
                .decode
                .get(seg)
                .copied()
                .ok_or_else(|| EncodingError::UnassignedCode(seg.to_string()))
        })
        .collect()
}

/// Encoded, deduplicated dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryEntitySet {
    entities: Vec<BinaryEntity>,
    entity_bit_length: usize,
    entity_chars: usize,
    duplicates_dropped: bool,
}

impl BinaryEntitySet {
    pub fn entities(&self) -> &[BinaryEntity] {
        &self.entities
    }

    pub fn entity_bit_length(&self) -> usize {
        self.entity_bit_length
    }

    pub fn entity_chars(&self) -> usize {
        self.entity_chars
    }

    /// Set when at least one repeated input string was dropped.
    pub fn duplicates_dropped(&self) -> bool {
        self.duplicates_dropped
    }

    /// One exact-match conjunction per entity.
    pub fn data_exprs(&self) -> Vec<BoolExpr> {
        self.entities.iter().map(BinaryEntity::exact_expr).collect()
    }
}

pub fn encode_dataset(
    codec: &AlphabetCodec,
    strings: &[String],
) -> Result<BinaryEntitySet, EncodingError> {
    let first = strings.first().ok_or(EncodingError::EmptyDataset)?;
    let chars = first.chars().count();
    let mut seen = BTreeSet::new();
    let mut entities = Vec::with_capacity(strings.len());
    let mut duplicates_dropped = false;
    for s in strings {
        let len = s.chars().count();
        if len != chars {
            return Err(EncodingError::UnequalLengths(s.clone(), len, chars));
        }
        let e = encode_string(codec, s)?;
        if seen.insert(e.clone()) {
            entities.push(e);
        } else {
            duplicates_dropped = true;
        }
    }
    Ok(BinaryEntitySet {
        entity_bit_length: chars * codec.width,
        entity_chars: chars,
        entities,
        duplicates_dropped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Prefix,
    Suffix,
    Substring,
    Exact,
}

/// Search term in surface syntax: `ab*` prefix, `*ab` suffix, `*ab*`
/// substring, `ab` exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WildcardTerm {
    kind: TermKind,
    text: String,
}

impl WildcardTerm {
    pub fn new(kind: TermKind, text: impl Into<String>) -> Result<Self, EncodingError> {
        let text = text.into();
        if text.is_empty() {
            return Err(EncodingError::BadTerm(text, "empty pattern"));
        }
        if text.contains('*') {
            return Err(EncodingError::BadTerm(text, "'*' only allowed at the ends"));
        }
        Ok(WildcardTerm { kind, text })
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// String-level match, the classical reference.
    pub fn matches(&self, s: &str) -> bool {
        match self.kind {
            TermKind::Prefix => s.starts_with(&self.text),
            TermKind::Suffix => s.ends_with(&self.text),
            TermKind::Substring => s.contains(&self.text),
            TermKind::Exact => s == self.text,
        }
    }
}

impl FromStr for WildcardTerm {
    type Err = EncodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lead = s.starts_with('*');
        let trail = s.len() > 1 && s.ends_with('*');
        let inner = &s[usize::from(lead)..s.len() - usize::from(trail)];
        let kind = match (lead, trail) {
            (true, true) => TermKind::Substring,
            (true, false) => TermKind::Suffix,
            (false, true) => TermKind::Prefix,
            (false, false) => TermKind::Exact,
        };
        WildcardTerm::new(kind, inner).map_err(|e| match e {
            EncodingError::BadTerm(_, why) => EncodingError::BadTerm(s.to_string(), why),
            other => other,
        })
    }
}

impl fmt::Display for WildcardTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Prefix => write!(f, "{}*", self.text),
            TermKind::Suffix => write!(f, "*{}", self.text),
            TermKind::Substring => write!(f, "*{}*", self.text),
            TermKind::Exact => f.write_str(&self.text),
        }
    }
}

fn literals_at(offset: usize, bits: &str) -> BoolExpr {
    BoolExpr::and_all(
        bits.bytes()
            .enumerate()
            .map(|(j, b)| BoolExpr::literal(offset + j, b == b'1'))
            .collect(),
    )
}

fn encode_term_bits(
    codec: &AlphabetCodec,
    term: &str,
    entity_chars: usize,
) -> Result<(String, usize), EncodingError> {
    let chars = term.chars().count();
    if chars > entity_chars {
        return Err(EncodingError::TermTooLong(term.into(), chars, entity_chars));
    }
    Ok((encode_string(codec, term)?.bits, chars))
}

/// Literals anchored at the first bits of the entity.
pub fn encode_prefix(
    codec: &AlphabetCodec,
    term: &str,
    entity_chars: usize,
) -> Result<BoolExpr, EncodingError> {
    let (bits, _) = encode_term_bits(codec, term, entity_chars)?;
    Ok(literals_at(0, &bits))
}

/// Literals anchored at the last bits of the entity.
pub fn encode_suffix(
    codec: &AlphabetCodec,
    term: &str,
    entity_chars: usize,
) -> Result<BoolExpr, EncodingError> {
    let (bits, chars) = encode_term_bits(codec, term, entity_chars)?;
    Ok(literals_at((entity_chars - chars) * codec.width, &bits))
}

/// Disjunction over every character-aligned placement of the term, stepping
/// by one segment width.
pub fn encode_substring(
    codec: &AlphabetCodec,
    term: &str,
    entity_chars: usize,
) -> Result<BoolExpr, EncodingError> {
    let (bits, chars) = encode_term_bits(codec, term, entity_chars)?;
    Ok(BoolExpr::or_all(
        (0..=entity_chars - chars)
            .map(|shift| literals_at(shift * codec.width, &bits))
            .collect(),
    ))
}

pub fn encode_exact(
    codec: &AlphabetCodec,
    term: &str,
    entity_chars: usize,
) -> Result<BoolExpr, EncodingError> {
    let (bits, chars) = encode_term_bits(codec, term, entity_chars)?;
    if chars != entity_chars {
        return Err(EncodingError::ExactLength(term.into(), chars, entity_chars));
    }
    Ok(literals_at(0, &bits))
}

pub fn encode_term(
    codec: &AlphabetCodec,
    term: &WildcardTerm,
    entity_chars: usize,
) -> Result<BoolExpr, EncodingError> {
    let encode = match term.kind {
        TermKind::Prefix => encode_prefix,
        TermKind::Suffix => encode_suffix,
        TermKind::Substring => encode_substring,
        TermKind::Exact => encode_exact,
    };
    encode(codec, &term.text, entity_chars)
}

/// `(d1 ^ d2 ^ ...) & (s1 | s2 | ...)`.
pub fn build_oracle_expression(
    data: &[BoolExpr],
    searches: &[BoolExpr],
) -> Result<BoolExpr, EncodingError> {
    if data.is_empty() {
        return Err(EncodingError::EmptyJoin("data entity"));
    }
    if searches.is_empty() {
        return Err(EncodingError::EmptyJoin("search term"));
    }
    Ok(BoolExpr::And(vec![
        BoolExpr::xor_all(data.to_vec()),
        BoolExpr::or_all(searches.to_vec()),
    ]))
}

/// Dataset strings matched by any of the terms.
pub fn classical_match(dataset: &[String], terms: &[WildcardTerm]) -> BTreeSet<String> {
    dataset
        .iter()
        .filter(|s| terms.iter().any(|t| t.matches(s)))
        .cloned()
        .collect()
}

/// Reads a dataset file body: one string per line, blank lines skipped.
pub fn parse_dataset(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty())
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolexpr::{parse, truth_table};

    fn strings(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn ab() -> AlphabetCodec {
        build_codec(&strings(&["aba", "abb"]), None).unwrap()
    }

    fn bits() -> AlphabetCodec {
        build_codec(&strings(&["01"]), None).unwrap()
    }

    #[test]
    fn auto_codec() {
        let c = ab();
        assert_eq!(c.symbols(), &['a', 'b']);
        assert_eq!(c.width(), 1);
        assert_eq!(c.code_of('a'), Some("0"));
        assert_eq!(c.code_of('b'), Some("1"));

        let c = build_codec(&strings(&["cab"]), None).unwrap();
        assert_eq!(c.width(), 2);
        assert_eq!(
            ['a', 'b', 'c'].map(|ch| c.code_of(ch).unwrap()),
            ["00", "01", "10"]
        );
        let single = build_codec(&strings(&["aaa"]), None).unwrap();
        assert_eq!((single.width(), single.code_of('a')), (1, Some("0")));
        let five = build_codec(&strings(&["abcde"]), None).unwrap();
        assert_eq!(five.width(), 3);
    }

    #[test]
    fn explicit_codec() {
        let bad: BTreeMap<char, String> = [('a', "00".into()), ('b', "0".into())].into();
        assert!(matches!(
            build_codec(&strings(&["ab"]), Some(bad)),
            Err(EncodingError::NonUniformWidth { .. })
        ));
        let dup: BTreeMap<char, String> = [('a', "1".into()), ('b', "1".into())].into();
        assert!(matches!(
            build_codec(&strings(&["ab"]), Some(dup)),
            Err(EncodingError::DuplicateCode(..))
        ));
        let c = AlphabetCodec::from_json(r#"{"width":2,"code":{"a":"11","b":"01"}}"#).unwrap();
        assert_eq!(encode_string(&c, "ab").unwrap().bits(), "1101");
        assert!(AlphabetCodec::from_json(r#"{"width":3,"code":{"a":"11"}}"#).is_err());
        assert!(build_codec(&[], None).is_err());
    }

    #[test]
    fn encode_and_decode() {
        let c = ab();
        assert_eq!(encode_string(&c, "aba").unwrap().bits(), "010");
        assert_eq!(encode_string(&c, "abbaa").unwrap().bits(), "01100");
        assert_eq!(encode_string(&c, ""), Err(EncodingError::EmptyString));
        assert_eq!(encode_string(&c, "abc"), Err(EncodingError::UnknownChar('c')));

        let e = BinaryEntity::new("010", 1).unwrap();
        assert_eq!(decode_entity(&c, &e).unwrap(), "aba");
        assert_eq!(e.index(), 2);

        let three = build_codec(&strings(&["abc"]), None).unwrap();
        let e = BinaryEntity::new("11", 2).unwrap();
        assert_eq!(
            decode_entity(&three, &e),
            Err(EncodingError::UnassignedCode("11".into()))
        );
        assert!(decode_bits(&c, "").is_err());
        assert!(decode_bits(&three, "011").is_err());
        assert!(BinaryEntity::new("011", 2).is_err());
    }

    #[test]
    fn dataset() {
        let c = bits();
        let set = encode_dataset(&c, &strings(&["000", "010", "011", "111"])).unwrap();
        assert_eq!(set.entities().len(), 4);
        assert_eq!(set.entity_bit_length(), 3);
        assert!(!set.duplicates_dropped());

        let c = build_codec(&strings(&["aa"]), None).unwrap();
        let set = encode_dataset(&c, &strings(&["aa", "aa"])).unwrap();
        assert_eq!(set.entities().len(), 1);
        assert!(set.duplicates_dropped());

        let c = ab();
        assert!(matches!(
            encode_dataset(&c, &strings(&["a", "ab"])),
            Err(EncodingError::UnequalLengths(..))
        ));
        assert_eq!(encode_dataset(&c, &[]), Err(EncodingError::EmptyDataset));
    }

    #[test]
    fn term_syntax() {
        let t: WildcardTerm = "ab*".parse().unwrap();
        assert_eq!((t.kind(), t.text()), (TermKind::Prefix, "ab"));
        let t: WildcardTerm = "*ab".parse().unwrap();
        assert_eq!((t.kind(), t.text()), (TermKind::Suffix, "ab"));
        let t: WildcardTerm = "*ab*".parse().unwrap();
        assert_eq!((t.kind(), t.text()), (TermKind::Substring, "ab"));
        let t: WildcardTerm = "ab".parse().unwrap();
        assert_eq!((t.kind(), t.text()), (TermKind::Exact, "ab"));
        for bad in ["", "*", "**", "a*b", "*a*b*", "***"] {
            assert!(bad.parse::<WildcardTerm>().is_err(), "{bad}");
        }
        for s in ["ab*", "*ab", "*ab*", "ab"] {
            assert_eq!(s.parse::<WildcardTerm>().unwrap().to_string(), s);
        }
        assert!(WildcardTerm::new(TermKind::Substring, "").is_err());
    }

    #[test]
    fn prefix_suffix() {
        let c = ab();
        assert_eq!(encode_prefix(&c, "ab", 3).unwrap(), parse("~x0&x1", 3).unwrap());
        assert_eq!(encode_prefix(&bits(), "01", 3).unwrap(), parse("~x0&x1", 3).unwrap());
        assert_eq!(encode_suffix(&c, "bb", 3).unwrap(), parse("x1&x2", 3).unwrap());
        assert_eq!(encode_suffix(&c, "b", 3).unwrap(), parse("x2", 3).unwrap());
        assert_eq!(encode_suffix(&c, "bbb", 3).unwrap(), parse("x0&x1&x2", 3).unwrap());
        assert!(matches!(
            encode_prefix(&c, "abab", 3),
            Err(EncodingError::TermTooLong(..))
        ));
        assert!(encode_suffix(&c, "abab", 3).is_err());
        assert!(encode_substring(&c, "abab", 3).is_err());
    }

    #[test]
    fn substring_placements() {
        let c = ab();
        assert_eq!(
            encode_substring(&c, "ba", 5).unwrap(),
            parse("(x0&~x1)|(x1&~x2)|(x2&~x3)|(x3&~x4)", 5).unwrap()
        );
        assert_eq!(encode_substring(&bits(), "1", 3).unwrap(), parse("x0|x1|x2", 3).unwrap());
        assert_eq!(encode_substring(&c, "aba", 3).unwrap(), parse("~x0&x1&~x2", 3).unwrap());
        // two-bit segments shift by whole characters
        let wide = build_codec(&strings(&["abc"]), None).unwrap();
        assert_eq!(
            encode_substring(&wide, "b", 2).unwrap(),
            parse("(~x0&x1)|(~x2&x3)", 4).unwrap()
        );
    }

    #[test]
    fn exact_terms() {
        let c = ab();
        assert_eq!(encode_exact(&c, "abb", 3).unwrap(), parse("~x0&x1&x2", 3).unwrap());
        assert!(matches!(encode_exact(&c, "ab", 3), Err(EncodingError::ExactLength(..))));
    }

    #[test]
    fn oracle_expression_for_two_matches() {
        let c = bits();
        let set = encode_dataset(&c, &strings(&["000", "010", "011", "111"])).unwrap();
        let search = encode_prefix(&c, "01", 3).unwrap();
        let e = build_oracle_expression(&set.data_exprs(), &[search]).unwrap();
        assert_eq!(
            e.render(),
            "((~x0&~x1&~x2)^(~x0&x1&~x2)^(~x0&x1&x2)^(x0&x1&x2))&(~x0&x1)"
        );
        assert_eq!(truth_table(&e, 3).unwrap().ones(), vec![0b010, 0b011]);

        let single = build_oracle_expression(&set.data_exprs()[..1], &[parse("x0", 3).unwrap()])
            .unwrap();
        assert_eq!(single.render(), "(~x0&~x1&~x2)&x0");
        assert!(build_oracle_expression(&[], &[BoolExpr::Const(true)]).is_err());
        assert!(build_oracle_expression(&set.data_exprs(), &[]).is_err());
    }

    #[test]
    fn classical() {
        let data = strings(&["000", "010", "011", "111"]);
        let prefix: WildcardTerm = "01*".parse().unwrap();
        assert_eq!(
            classical_match(&data, &[prefix]),
            BTreeSet::from(["010".to_string(), "011".to_string()])
        );
        let sub: WildcardTerm = "*ba*".parse().unwrap();
        assert_eq!(classical_match(&strings(&["abbaa"]), &[sub]).len(), 1);
        let none: WildcardTerm = "10*".parse().unwrap();
        assert!(classical_match(&data, &[none]).is_empty());
        let union = ["00*", "*11"].map(|t| t.parse().unwrap());
        assert_eq!(classical_match(&data, &union).len(), 3);
    }

    #[test]
    fn dataset_file() {
        assert_eq!(parse_dataset("aba\n\n  \nabb\r\n"), strings(&["aba", "abb"]));
    }
}
