//! Built-in summation theorems.

use crate::algebra::Symbol;
use crate::hyperterm::TheoremSpec;
use crate::schema::{GammaDoc, Scalar, SpecDoc};

/// A theorem with its pipeline settings.
#[derive(Clone, Debug)]
pub struct Entry {
    pub spec: TheoremSpec,
    /// Overrides the automatic shift choice.
    pub shift: Option<(Symbol, u32)>,
    /// Unit extensions of the validity domain after the proof.
    pub extensions: Option<(Symbol, u32)>,
    /// Set when the symbolic pipeline is not attempted; the entry is then
    /// only checked numerically.
    pub numeric_only: Option<&'static str>,
}

fn g(sign: i32, arg: &str) -> GammaDoc {
    GammaDoc { sign, arg: arg.into() }
}

fn doc(name: &str, upper: &[&str], lower: &[&str], z: Scalar, rhs: Vec<GammaDoc>, conditions: &[&str]) -> TheoremSpec {
    SpecDoc {
        name: name.into(),
        upper: upper.iter().map(|s| s.to_string()).collect(),
        lower: lower.iter().map(|s| s.to_string()).collect(),
        z,
        rhs_gammas: rhs,
        conditions: conditions.iter().map(|s| s.to_string()).collect(),
    }
    .to_spec()
    .expect("built-in theorem is well formed")
}

/// The built-in theorems in listing order.
pub fn builtin() -> Vec<Entry> {
    let plain = |spec| Entry { spec, shift: None, extensions: None, numeric_only: None };
    vec![
        Entry {
            spec: doc(
                "kummer",
                &["a", "b"],
                &["1+a-b"],
                Scalar::Int(-1),
                vec![g(1, "1+a/2"), g(1, "1+a-b"), g(-1, "1+a"), g(-1, "1+a/2-b")],
                &["Re(b) < 1"],
            ),
            shift: None,
            extensions: Some((Symbol::new("b"), 1)),
            numeric_only: None,
        },
        plain(doc(
            "bailey",
            &["a", "1-a"],
            &["b"],
            Scalar::Text("1/2".into()),
            vec![g(1, "b/2"), g(1, "1/2+b/2"), g(-1, "a/2+b/2"), g(-1, "1/2-a/2+b/2")],
            &[],
        )),
        plain(doc(
            "dixon",
            &["a", "b", "c"],
            &["1+a-b", "1+a-c"],
            Scalar::Int(1),
            vec![
                g(1, "1+a-b"),
                g(1, "1+a-c"),
                g(1, "1+a/2"),
                g(1, "1+a/2-b-c"),
                g(-1, "1+a"),
                g(-1, "1+a/2-b"),
                g(-1, "1+a/2-c"),
                g(-1, "1+a-b-c"),
            ],
            &["Re(2+a-2b-2c) > 0"],
        )),
        plain(doc(
            "gauss",
            &["a", "b"],
            &["c"],
            Scalar::Int(1),
            vec![g(1, "c"), g(1, "c-a-b"), g(-1, "c-a"), g(-1, "c-b")],
            &["Re(c-a-b) > 0"],
        )),
        plain(doc(
            "dixon_4f3",
            &["a", "1+a/2", "b", "c"],
            &["a/2", "1+a-b", "1+a-c"],
            Scalar::Int(-1),
            vec![g(1, "1+a-b"), g(1, "1+a-c"), g(-1, "1+a"), g(-1, "1+a-b-c")],
            &["Re(2+a-2b-2c) > 0"],
        )),
        plain(doc(
            "dixon_5f4",
            &["a", "1+a/2", "b", "c", "d"],
            &["a/2", "1+a-b", "1+a-c", "1+a-d"],
            Scalar::Int(1),
            vec![
                g(1, "1+a-b"),
                g(1, "1+a-c"),
                g(1, "1+a-d"),
                g(1, "1+a-b-c-d"),
                g(-1, "1+a"),
                g(-1, "1+a-b-c"),
                g(-1, "1+a-b-d"),
                g(-1, "1+a-c-d"),
            ],
            &["Re(1+a-b-c-d) > 0"],
        )),
    ]
}

pub fn lookup(name: &str) -> Option<Entry> {
    builtin().into_iter().find(|e| e.spec.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_spec;

    #[test]
    fn six_unique_entries_that_round_trip() {
        let all = builtin();
        assert_eq!(all.len(), 6);
        let mut names: Vec<_> = all.iter().map(|e| e.spec.name.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), 6);
        for e in &all {
            let json = serde_json::to_string(&SpecDoc::from_spec(&e.spec)).unwrap();
            assert_eq!(parse_spec(&json).unwrap(), e.spec);
        }
        assert!(lookup("dixon_5f4").unwrap().spec.params().contains(&Symbol::new("d")));
    }
}
