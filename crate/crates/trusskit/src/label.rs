/*!
Labels for truss elements.

A labelling decorates every element of a tower's top poset. Labels are either
compared by equality only, or — when the labelling is marked `ordered` —
required to be integers that increase along the order relation (the label
poset is an ordinal).
*/

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Unit,
    Int(i64),
    Str(String),
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Label::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn pair(a: Label, b: Label) -> Label {
        Label::Pair(Box::new(a), Box::new(b))
    }
}

impl core::fmt::Display for Label {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Label::Unit => write!(f, "()"),
            Label::Int(v) => write!(f, "{v}"),
            Label::Str(s) => write!(f, "{s}"),
            Label::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

/// One label per element of a tower's top poset, in element order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labelling {
    pub values: Vec<Label>,
    /// When set, labels must be integers and monotone along the top order.
    pub ordered: bool,
}

impl Labelling {
    pub fn equality(values: Vec<Label>) -> Self {
        Labelling { values, ordered: false }
    }

    pub fn ordered(values: Vec<Label>) -> Self {
        Labelling { values, ordered: true }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, idx: usize) -> &Label {
        &self.values[idx]
    }
}
