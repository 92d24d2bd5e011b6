//! Case folding used for every duplicate check, exclusion test and
//! case-insensitive match in the workbench.
//!
//! The mapping is one char to one char, so folded text has the same number
//! of chars as its source and offsets can be carried across.

/// Simple (single code point) case fold of `c`.
pub fn fold_char(c: char) -> char {
    if c.is_ascii() {
        return c.to_ascii_lowercase();
    }
    match c {
        // Fold targets that differ from the lowercase mapping.
        '\u{00B5}' => '\u{03BC}',
        '\u{017F}' => 's',
        '\u{0345}' | '\u{1FBE}' => '\u{03B9}',
        '\u{03C2}' => '\u{03C3}',
        '\u{03D0}' => '\u{03B2}',
        '\u{03D1}' => '\u{03B8}',
        '\u{03D5}' => '\u{03C6}',
        '\u{03D6}' => '\u{03C0}',
        '\u{03F0}' => '\u{03BA}',
        '\u{03F1}' => '\u{03C1}',
        '\u{03F5}' => '\u{03B5}',
        '\u{1E9B}' => '\u{1E61}',
        '\u{1E9E}' => '\u{00DF}',
        // Cherokee folds to the uppercase block.
        '\u{13F8}'..='\u{13FD}' => char::from_u32(c as u32 - 8).unwrap_or(c),
        '\u{AB70}'..='\u{ABBF}' => char::from_u32(c as u32 - 0xAB70 + 0x13A0).unwrap_or(c),
        _ => {
            let mut lower = c.to_lowercase();
            match (lower.next(), lower.next()) {
                (Some(l), None) => l,
                _ => c,
            }
        }
    }
}

/// Case-folded copy of `s`.
pub fn fold(s: &str) -> String {
    s.chars().map(fold_char).collect()
}

/// Whether `a` and `b` are equal under case folding.
pub fn fold_eq(a: &str, b: &str) -> bool {
    a.chars().count() == b.chars().count()
        && a.chars()
            .zip(b.chars())
            .all(|(x, y)| fold_char(x) == fold_char(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_and_latin() {
        assert_eq!(fold("Balcony"), "balcony");
        assert_eq!(fold("ÉCOLE"), "école");
        assert!(fold_eq("System Kitchen", "system kitchen"));
        assert!(!fold_eq("bath", "baths"));
    }

    #[test]
    fn fold_specific_targets() {
        assert_eq!(fold("ΣΑΣ"), fold("σας"));
        assert_eq!(fold_char('ſ'), 's');
        assert_eq!(fold_char('K'), 'k'); // Kelvin sign
                                         // Dotted capital I has no single code point fold.
        assert_eq!(fold_char('İ'), 'İ');
    }

    #[test]
    fn preserves_char_count() {
        for s in ["İstanbul", "ǅemal", "ﬁne", "ΐ", "groß", "ᏸ"] {
            assert_eq!(fold(s).chars().count(), s.chars().count(), "{s}");
        }
    }
}
