use std::collections::{BTreeMap, BTreeSet};

use super::{Atom, KernelError, Name, Prop, Sort, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// A constant of the given sort (possibly an arrow sort).
    Individual(Sort),
    Function {
        args: Vec<Sort>,
        result: Sort,
    },
    Predicate(Vec<Sort>),
}

impl SymbolKind {
    fn sorts(&self) -> Vec<&Sort> {
        match self {
            SymbolKind::Individual(s) => vec![s],
            SymbolKind::Function { args, result } => {
                args.iter().chain(std::iter::once(result)).collect()
            }
            SymbolKind::Predicate(args) => args.iter().collect(),
        }
    }

    /// Declared from first use: some sort is a `?` placeholder.
    pub fn is_implicit(&self) -> bool {
        self.sorts().iter().any(|s| {
            let mut vars = Vec::new();
            s.vars(&mut vars);
            vars.iter().any(|v| v.starts_with('?'))
        })
    }

    /// Variant and arity.
    fn shape(&self) -> (u8, usize) {
        match self {
            SymbolKind::Individual(_) => (0, 0),
            SymbolKind::Function { args, .. } => (1, args.len()),
            SymbolKind::Predicate(args) => (2, args.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    User,
    Builtin,
    /// Introduced by skolemization; `source` is the discharged existential.
    Skolem {
        source: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: Name,
    pub kind: SymbolKind,
    pub origin: Origin,
}

impl Symbol {
    pub fn is_predicate(&self) -> bool {
        matches!(self.kind, SymbolKind::Predicate(_))
    }

    pub fn arity(&self) -> usize {
        match &self.kind {
            SymbolKind::Individual(_) => 0,
            SymbolKind::Function { args, .. } => args.len(),
            SymbolKind::Predicate(args) => args.len(),
        }
    }
}

/// How numeric literals in the concrete syntax are read.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum NumeralMode {
    /// `0`, `1`, ... are ordinary constant names.
    #[default]
    Plain,
    /// `n` is `succ^n(zero)`.
    Peano { succ: Name, zero: Name },
    /// `1` is the first de Bruijn index, `n+1` is `1[shift^n]`.
    DeBruijn,
}

#[derive(Clone, Debug, Default)]
pub struct Signature {
    sorts: BTreeSet<Name>,
    symbols: BTreeMap<Name, Symbol>,
    pub numerals: NumeralMode,
    counter: usize,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_sort(&mut self, name: &str) {
        self.sorts.insert(name.into());
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Name> {
        self.sorts.iter()
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    pub fn declare(
        &mut self,
        name: &str,
        kind: SymbolKind,
        origin: Origin,
    ) -> Result<(), KernelError> {
        if let Some(existing) = self.symbols.get(name) {
            if existing.kind == kind {
                return Ok(());
            }
            if existing.kind.is_implicit() && existing.kind.shape() == kind.shape() {
                self.symbols.insert(
                    name.into(),
                    Symbol {
                        name: name.into(),
                        kind,
                        origin,
                    },
                );
                return Ok(());
            }
            return Err(KernelError::DuplicateSymbol(name.into()));
        }
        self.symbols.insert(
            name.into(),
            Symbol {
                name: name.into(),
                kind,
                origin,
            },
        );
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    /// Drop the symbols declared from first use.
    pub fn forget_implicit(&mut self) {
        self.symbols.retain(|_, s| !s.kind.is_implicit());
    }

    pub fn is_skolem(&self, name: &str) -> bool {
        matches!(
            self.symbols.get(name),
            Some(Symbol {
                origin: Origin::Skolem { .. },
                ..
            })
        )
    }

    /// A symbol name derived from `base` not yet used in the signature.
    pub fn fresh_symbol_name(&self, base: &str) -> String {
        let base: String = base.trim_end_matches(['\'', '_']).to_string();
        let base = if base.is_empty() {
            "sk".to_string()
        } else {
            base
        };
        if !self.symbols.contains_key(base.as_str()) {
            return base;
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|n| !self.symbols.contains_key(n.as_str()))
            .unwrap()
    }

    /// Next value of the signature-scoped counter used for fresh variables.
    pub fn next_counter(&mut self) -> usize {
        self.counter += 1;
        self.counter
    }

    /// Fresh variable named after `base`, e.g. `X_12`.
    pub fn fresh_var(&mut self, base: &Var) -> Var {
        let stem = var_stem(&base.name);
        let n = self.next_counter();
        Var {
            name: format!("{stem}_{n}").into(),
            sort: base.sort.clone(),
        }
    }
}

/// Variable name without a `_N` renaming suffix.
pub fn var_stem(name: &str) -> &str {
    match name.rfind('_') {
        Some(i)
            if i > 0 && name[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < name.len() =>
        {
            &name[..i]
        }
        _ => name,
    }
}

/// Hindley-Milner style sort inference over first-order ranks with sort variables.
pub struct SortInference<'a> {
    sig: &'a Signature,
    map: BTreeMap<Name, Sort>,
    fresh: usize,
}

impl<'a> SortInference<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        SortInference {
            sig,
            map: BTreeMap::new(),
            fresh: 0,
        }
    }

    pub fn resolve(&self, s: &Sort) -> Sort {
        s.resolve(&self.map)
    }

    fn instantiate(&mut self, sorts: &[&Sort]) -> Vec<Sort> {
        let mut vars = Vec::new();
        for s in sorts {
            s.vars(&mut vars);
        }
        self.fresh += 1;
        let renaming: BTreeMap<Name, Sort> = vars
            .into_iter()
            .filter(|v| !v.starts_with('?'))
            .map(|v| (v.clone(), Sort::Var(format!("{v}#{}", self.fresh).into())))
            .collect();
        sorts.iter().map(|s| s.resolve(&renaming)).collect()
    }

    fn unify(&mut self, found: &Sort, expected: &Sort, symbol: &str) -> Result<(), KernelError> {
        if super::sort::unify_sorts(found, expected, &mut self.map) {
            Ok(())
        } else {
            Err(KernelError::RankMismatch {
                symbol: symbol.into(),
                detail: format!(
                    "expected {}, found {}",
                    self.resolve(expected),
                    self.resolve(found)
                ),
            })
        }
    }

    pub fn term(&mut self, t: &Term) -> Result<Sort, KernelError> {
        match t {
            Term::Var(v) => Ok(self.resolve(&v.sort)),
            Term::App(h, args) => {
                let sym = self
                    .sig
                    .get(h)
                    .ok_or_else(|| KernelError::UnknownSymbol(h.clone()))?;
                match &sym.kind {
                    SymbolKind::Individual(s) => {
                        if !args.is_empty() {
                            return Err(KernelError::RankMismatch {
                                symbol: h.clone(),
                                detail: format!("individual applied to {} arguments", args.len()),
                            });
                        }
                        let inst = self.instantiate(&[s]);
                        Ok(inst[0].clone())
                    }
                    SymbolKind::Function {
                        args: ranks,
                        result,
                    } => {
                        if ranks.len() != args.len() {
                            return Err(KernelError::RankMismatch {
                                symbol: h.clone(),
                                detail: format!(
                                    "expected {} arguments, found {}",
                                    ranks.len(),
                                    args.len()
                                ),
                            });
                        }
                        let mut all: Vec<&Sort> = ranks.iter().collect();
                        all.push(result);
                        let inst = self.instantiate(&all);
                        for (arg, expected) in args.iter().zip(&inst) {
                            let found = self.term(arg)?;
                            self.unify(&found, expected, h)?;
                        }
                        Ok(self.resolve(&inst[ranks.len()]))
                    }
                    SymbolKind::Predicate(_) => Err(KernelError::RankMismatch {
                        symbol: h.clone(),
                        detail: "predicate used as a term".into(),
                    }),
                }
            }
        }
    }

    pub fn atom(&mut self, a: &Atom) -> Result<(), KernelError> {
        let sym = self
            .sig
            .get(&a.pred)
            .ok_or_else(|| KernelError::UnknownSymbol(a.pred.clone()))?;
        let SymbolKind::Predicate(ranks) = &sym.kind else {
            return Err(KernelError::RankMismatch {
                symbol: a.pred.clone(),
                detail: "not a predicate".into(),
            });
        };
        if ranks.len() != a.args.len() {
            return Err(KernelError::RankMismatch {
                symbol: a.pred.clone(),
                detail: format!("expected {} arguments, found {}", ranks.len(), a.args.len()),
            });
        }
        let refs: Vec<&Sort> = ranks.iter().collect();
        let inst = self.instantiate(&refs);
        for (arg, expected) in a.args.iter().zip(&inst) {
            let found = self.term(arg)?;
            self.unify(&found, expected, &a.pred)?;
        }
        Ok(())
    }

    pub fn prop(&mut self, p: &Prop) -> Result<(), KernelError> {
        match p {
            Prop::Atom(a) => self.atom(a),
            _ => p.children().into_iter().try_for_each(|c| self.prop(c)),
        }
    }

    /// Equate the sorts of two terms (used for constraints and rule sides).
    pub fn same_sort(&mut self, a: &Term, b: &Term) -> Result<(), KernelError> {
        let sa = self.term(a)?;
        let sb = self.term(b)?;
        self.unify(&sa, &sb, "=")
    }

    pub fn elaborate_term(&self, t: &Term) -> Term {
        t.map_vars(&mut |v| {
            Term::Var(Var {
                name: v.name.clone(),
                sort: self.resolve(&v.sort),
            })
        })
    }

    pub fn elaborate_atom(&self, a: &Atom) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| self.elaborate_term(t)).collect(),
        }
    }

    pub fn elaborate_prop(&self, p: &Prop) -> Prop {
        let var = |v: &Var| Var {
            name: v.name.clone(),
            sort: self.resolve(&v.sort),
        };
        match p {
            Prop::Atom(a) => Prop::Atom(self.elaborate_atom(a)),
            Prop::Bot => Prop::Bot,
            Prop::Top => Prop::Top,
            Prop::Not(q) => Prop::not(self.elaborate_prop(q)),
            Prop::And(a, b) => Prop::and(self.elaborate_prop(a), self.elaborate_prop(b)),
            Prop::Or(a, b) => Prop::or(self.elaborate_prop(a), self.elaborate_prop(b)),
            Prop::Imp(a, b) => Prop::imp(self.elaborate_prop(a), self.elaborate_prop(b)),
            Prop::Iff(a, b) => Prop::iff(self.elaborate_prop(a), self.elaborate_prop(b)),
            Prop::Forall(v, b) => Prop::forall(var(v), self.elaborate_prop(b)),
            Prop::Exists(v, b) => Prop::exists(var(v), self.elaborate_prop(b)),
        }
    }
}

/// The sort of a term, rejecting ill-sorted terms.
pub fn sort_of(t: &Term, sig: &Signature) -> Result<Sort, KernelError> {
    SortInference::new(sig).term(t)
}

/// Check a proposition against the signature.
pub fn check_prop(p: &Prop, sig: &Signature) -> Result<(), KernelError> {
    SortInference::new(sig).prop(p)
}
