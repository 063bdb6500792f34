use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Real,
    Int,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Real => "real",
            Sort::Int => "int",
        })
    }
}

/// Relation of a normalized atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Lt,
    Eq,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
        }
    }
}

/// `Σ coeffs[x]·x  rel  constant`, integer coefficients, no zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub coeffs: BTreeMap<String, BigInt>,
    pub rel: Rel,
    pub constant: BigInt,
}

impl Atom {
    pub fn new(coeffs: impl IntoIterator<Item = (String, BigInt)>, rel: Rel, constant: BigInt) -> Atom {
        let mut map: BTreeMap<String, BigInt> = BTreeMap::new();
        for (x, a) in coeffs {
            *map.entry(x).or_insert_with(BigInt::zero) += a;
        }
        map.retain(|_, a| !a.is_zero());
        Atom {
            coeffs: map,
            rel,
            constant,
        }
    }

    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Option<bool> {
        let mut lhs = BigRational::zero();
        for (x, a) in &self.coeffs {
            lhs += BigRational::from_integer(a.clone()) * point.get(x)?;
        }
        let c = BigRational::from_integer(self.constant.clone());
        Some(match self.rel {
            Rel::Le => lhs <= c,
            Rel::Lt => lhs < c,
            Rel::Eq => lhs == c,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (x, a)) in self.coeffs.iter().enumerate() {
            let mag = a.abs();
            match (i, a.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{x}")?;
            } else {
                write!(f, "{mag}*{x}")?;
            }
        }
        write!(f, " {} {}", self.rel.symbol(), self.constant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Bool(bool),
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Sort, Box<Formula>),
    Forall(String, Sort, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, sort: Sort, body: Formula) -> Formula {
        Formula::Exists(x.to_string(), sort, Box::new(body))
    }

    pub fn forall(x: &str, sort: Sort, body: Formula) -> Formula {
        Formula::Forall(x.to_string(), sort, Box::new(body))
    }

    /// Conjunction of a list; `true` when empty.
    pub fn all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Bool(true))
    }

    /// Disjunction of a list; `false` when empty.
    pub fn any(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or(Formula::Bool(false))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Bool(_) | Formula::Atom(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Free variable names, sorted.
    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bool(_) => {}
            Formula::Atom(a) => {
                for x in a.coeffs.keys() {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, _, body) | Formula::Forall(x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Exact truth value of a quantifier-free formula; `None` when a
    /// quantifier is met or a variable is missing from `point`.
    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Option<bool> {
        Some(match self {
            Formula::Bool(b) => *b,
            Formula::Atom(a) => a.eval(point)?,
            Formula::Not(a) => !a.eval(point)?,
            Formula::And(a, b) => a.eval(point)? & b.eval(point)?,
            Formula::Or(a, b) => a.eval(point)? | b.eval(point)?,
            Formula::Implies(a, b) => !a.eval(point)? | b.eval(point)?,
            Formula::Iff(a, b) => a.eval(point)? == b.eval(point)?,
            Formula::Exists(..) | Formula::Forall(..) => return None,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::Bool(_) | Formula::Atom(_) => 6,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Bool(b) => write!(f, "{b}"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(a) => {
                write!(f, "not ")?;
                a.fmt_at(f, 5)
            }
            Formula::And(a, b) => {
                a.fmt_at(f, 4)?;
                write!(f, " and ")?;
                b.fmt_at(f, 5)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, 3)?;
                write!(f, " or ")?;
                b.fmt_at(f, 4)
            }
            Formula::Implies(a, b) => {
                a.fmt_at(f, 3)?;
                write!(f, " -> ")?;
                b.fmt_at(f, 2)
            }
            Formula::Iff(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " <-> ")?;
                b.fmt_at(f, 2)
            }
            Formula::Exists(x, s, body) => {
                write!(f, "exists {x}:{s}. ")?;
                body.fmt_at(f, 0)
            }
            Formula::Forall(x, s, body) => {
                write!(f, "forall {x}:{s}. ")?;
                body.fmt_at(f, 0)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Ordered free variables; variable `k` owns integer and decimal
/// coordinate `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VarContext {
    vars: Vec<(String, Sort)>,
}

impl VarContext {
    pub fn new(vars: Vec<(String, Sort)>) -> VarContext {
        VarContext { vars }
    }

    /// Every name real-sorted, in the given order.
    pub fn reals<S: AsRef<str>>(names: &[S]) -> VarContext {
        VarContext {
            vars: names.iter().map(|n| (n.as_ref().to_string(), Sort::Real)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[(String, Sort)] {
        &self.vars
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }
}

/// Free variables of `f`, sorted by name, all real-sorted.
pub fn free_vars(f: &Formula) -> VarContext {
    VarContext::reals(&f.free_names().into_iter().collect::<Vec<_>>())
}
