//! The rank-2 Frobenius algebra `Z[X]/(X^2)` with basis `{1, X}`.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    One,
    X,
}

impl Label {
    pub fn degree(self) -> i64 {
        match self {
            Label::One => 1,
            Label::X => -1,
        }
    }

    pub(crate) fn from_bit(b: bool) -> Label {
        if b {
            Label::X
        } else {
            Label::One
        }
    }

    pub(crate) fn bit(self) -> bool {
        self == Label::X
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::One => "1",
            Label::X => "X",
        })
    }
}

/// Multiplication: `1*1 = 1`, `1*X = X*1 = X`, `X*X = 0`.
pub fn multiply(a: Label, b: Label) -> Option<Label> {
    match (a, b) {
        (Label::One, Label::One) => Some(Label::One),
        (Label::X, Label::X) => None,
        _ => Some(Label::X),
    }
}

/// Comultiplication: `1 -> 1(x)X + X(x)1`, `X -> X(x)X`.
pub fn comultiply(a: Label) -> Vec<(Label, Label)> {
    match a {
        Label::One => vec![(Label::One, Label::X), (Label::X, Label::One)],
        Label::X => vec![(Label::X, Label::X)],
    }
}

pub fn unit() -> Label {
    Label::One
}

/// Counit: `1 -> 0`, `X -> 1`.
pub fn counit(a: Label) -> i64 {
    match a {
        Label::One => 0,
        Label::X => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    const BASIS: [Label; 2] = [Label::One, Label::X];

    type Tensor3 = BTreeMap<(Label, Label, Label), i64>;

    fn add(t: &mut Tensor3, k: (Label, Label, Label), c: i64) {
        *t.entry(k).or_default() += c;
        t.retain(|_, v| *v != 0);
    }

    #[test]
    fn frobenius_relation() {
        // (m (x) id)(id (x) Delta) = Delta m on A (x) A, both landing in A (x) A
        for a in BASIS {
            for b in BASIS {
                let mut lhs: BTreeMap<(Label, Label), i64> = BTreeMap::new();
                for (c1, c2) in comultiply(b) {
                    if let Some(p) = multiply(a, c1) {
                        *lhs.entry((p, c2)).or_default() += 1;
                    }
                }
                let mut rhs: BTreeMap<(Label, Label), i64> = BTreeMap::new();
                if let Some(p) = multiply(a, b) {
                    for t in comultiply(p) {
                        *rhs.entry(t).or_default() += 1;
                    }
                }
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn coassociative() {
        for a in BASIS {
            let mut left = Tensor3::new();
            let mut right = Tensor3::new();
            for (x, y) in comultiply(a) {
                for (x1, x2) in comultiply(x) {
                    add(&mut left, (x1, x2, y), 1);
                }
                for (y1, y2) in comultiply(y) {
                    add(&mut right, (x, y1, y2), 1);
                }
            }
            assert_eq!(left, right);
        }
    }

    #[test]
    fn scalar_identities() {
        assert_eq!(counit(unit()), 0);
        // epsilon m Delta eta = 2
        let total: i64 = comultiply(unit()).into_iter().filter_map(|(a, b)| multiply(a, b)).map(counit).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn trace_form_is_nondegenerate() {
        // epsilon(m(a, b)) pairs 1 with X
        let pair = |a, b| multiply(a, b).map_or(0, counit);
        assert_eq!(pair(Label::One, Label::One), 0);
        assert_eq!(pair(Label::One, Label::X), 1);
        assert_eq!(pair(Label::X, Label::One), 1);
        assert_eq!(pair(Label::X, Label::X), 0);
    }

    #[test]
    fn degrees() {
        // m and Delta have degree -1; eta and epsilon have degree +1
        for a in BASIS {
            for b in BASIS {
                if let Some(p) = multiply(a, b) {
                    assert_eq!(p.degree(), a.degree() + b.degree() - 1);
                }
            }
            for (x, y) in comultiply(a) {
                assert_eq!(x.degree() + y.degree(), a.degree() - 1);
            }
        }
        assert_eq!(unit().degree(), 1);
    }
}
