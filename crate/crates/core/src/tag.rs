//! The Penn Treebank tag set plus the pattern wildcard.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! pos_tags {
    (
        words { $($wvar:ident => $wstr:literal),* $(,)? }
        symbols { $($svar:ident => $sstr:literal),* $(,)? }
    ) => {
        /// A part-of-speech tag, or the `*` wildcard used inside rule patterns.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PosTag {
            $($wvar,)*
            $($svar,)*
            Wildcard,
        }

        impl PosTag {
            /// The 36 word tags, in Penn Treebank order.
            pub const WORD_TAGS: [PosTag; 36] = [$(PosTag::$wvar),*];

            /// The 12 symbol and punctuation tags.
            pub const SYMBOL_TAGS: [PosTag; 12] = [$(PosTag::$svar),*];

            /// Every value of the enumeration, wildcard last.
            pub const ALL: [PosTag; 49] = [$(PosTag::$wvar,)* $(PosTag::$svar,)* PosTag::Wildcard];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(PosTag::$wvar => $wstr,)*
                    $(PosTag::$svar => $sstr,)*
                    PosTag::Wildcard => "*",
                }
            }

            /// True for the 12 symbol tags only.
            pub fn is_punctuation(self) -> bool {
                matches!(self, $(PosTag::$svar)|*)
            }
        }

        impl FromStr for PosTag {
            type Err = UnknownTag;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($wstr => Ok(PosTag::$wvar),)*
                    $($sstr => Ok(PosTag::$svar),)*
                    // Older tagger outputs use raw brackets.
                    "(" => Ok(PosTag::LeftBracket),
                    ")" => Ok(PosTag::RightBracket),
                    "*" => Ok(PosTag::Wildcard),
                    _ => Err(UnknownTag(s.to_string())),
                }
            }
        }
    };
}

pos_tags! {
    words {
        CC => "CC", CD => "CD", DT => "DT", EX => "EX", FW => "FW", IN => "IN",
        JJ => "JJ", JJR => "JJR", JJS => "JJS", LS => "LS", MD => "MD", NN => "NN",
        NNS => "NNS", NNP => "NNP", NNPS => "NNPS", PDT => "PDT", POS => "POS", PRP => "PRP",
        PRPS => "PRP$", RB => "RB", RBR => "RBR", RBS => "RBS", RP => "RP", SYM => "SYM",
        TO => "TO", UH => "UH", VB => "VB", VBD => "VBD", VBG => "VBG", VBN => "VBN",
        VBP => "VBP", VBZ => "VBZ", WDT => "WDT", WP => "WP", WPS => "WP$", WRB => "WRB",
    }
    symbols {
        Pound => "#", Dollar => "$", Period => ".", Comma => ",", Colon => ":",
        LeftBracket => "-LRB-", RightBracket => "-RRB-", StraightQuote => "\"",
        LeftSingleQuote => "`", LeftDoubleQuote => "``", RightSingleQuote => "'",
        RightDoubleQuote => "''",
    }
}

impl PosTag {
    pub fn is_wildcard(self) -> bool {
        self == PosTag::Wildcard
    }

    /// Whether a pattern element accepts a data tag. The wildcard accepts any
    /// word tag but never punctuation.
    #[inline]
    pub fn accepts(self, data: PosTag) -> bool {
        !data.is_punctuation() && (self == data || self == PosTag::Wildcard)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for PosTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PosTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown part-of-speech tag `{0}`")]
pub struct UnknownTag(pub String);

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn tag_set_has_49_distinct_values() {
        let all: HashSet<_> = PosTag::ALL.iter().collect();
        assert_eq!(all.len(), 49);
        let strs: HashSet<_> = PosTag::ALL.iter().map(|t| t.as_str()).collect();
        assert_eq!(strs.len(), 49);
    }

    #[test]
    fn punctuation_is_exactly_the_symbol_tags() {
        for t in PosTag::WORD_TAGS {
            assert!(!t.is_punctuation(), "{t}");
        }
        for t in PosTag::SYMBOL_TAGS {
            assert!(t.is_punctuation(), "{t}");
        }
        assert!(!PosTag::Wildcard.is_punctuation());
    }

    #[test]
    fn strings_round_trip() {
        for t in PosTag::ALL {
            assert_eq!(t.as_str().parse::<PosTag>().unwrap(), t);
        }
        assert_eq!("(".parse::<PosTag>().unwrap(), PosTag::LeftBracket);
        assert_eq!("QQ".parse::<PosTag>(), Err(UnknownTag("QQ".into())));
        assert!("nn".parse::<PosTag>().is_err());
    }

    #[test]
    fn wildcard_rejects_punctuation() {
        assert!(PosTag::Wildcard.accepts(PosTag::NN));
        assert!(!PosTag::Wildcard.accepts(PosTag::Period));
        assert!(PosTag::JJ.accepts(PosTag::JJ));
        assert!(!PosTag::JJ.accepts(PosTag::JJR));
    }
}
