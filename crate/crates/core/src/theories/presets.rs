//! Built-in theories in the theory file format.

pub const ARITH: &str = "\
theory arith
sort nat
numerals peano S 0
const 0 : nat
fun S(nat) : nat
fun +(nat, nat) : nat
fun *(nat, nat) : nat
pred =(nat, nat)
E plus_zero: 0 + y -> y
E plus_succ: S(x) + y -> S(x + y)
E times_zero: 0 * y -> 0
E times_succ: S(x) * y -> x * y + y
axiom refl: forall x. x = x
goal half_of_four: exists x. 2 * x = 4
";

pub const INTEGRAL_RINGS: &str = "\
theory integral-rings
sort ring
strategy onfly
const 0 : ring
const a : ring
fun *(ring, ring) : ring
pred =(ring, ring)
R integral: x * y = 0 -> x = 0 \\/ y = 0
goal square: exists y. (a * a = y => a = y)
";

pub const HOL_COMB: &str = "\
theory hol-comb
sort i o
fun @('a -> 'b, 'a) : 'b
const S : ('a -> 'b -> 'c) -> ('a -> 'b) -> 'a -> 'c
const K : 'a -> 'b -> 'a
const dnot : o -> o
const dor : o -> o -> o
const dall : ('a -> o) -> o
pred eps(o)
E S: S x y z -> x z (y z)
E K: K x y -> x
R dnot: eps(dnot x) -> ~eps(x)
R dor: eps(dor x y) -> eps(x) \\/ eps(y)
R dall: eps(dall x) -> forall y. eps(x y)
";

pub const HOL_SIGMA: &str = "\
theory hol-sigma
sort tm sb
numerals debruijn
fun @(tm, tm) : tm
fun lam(tm) : tm
fun clos(tm, sb) : tm
fun cons(tm, sb) : sb
fun comp(sb, sb) : sb
const id : sb
const shift : sb
const 1 : tm
const dnot : tm
const dor : tm
const dall : tm
pred eps(tm)
E beta: lam(a) b -> a[cons(b, id)]
eta eta
E app: (a b)[s] -> a[s] b[s]
E var_cons: 1[cons(a, s)] -> a
E clos_id: a[id] -> a
E abs: lam(a)[s] -> lam(a[cons(1, comp(s, shift))])
E clos_clos: a[s][t] -> a[comp(s, t)]
E id_comp: comp(id, s) -> s
E shift_cons: comp(shift, cons(a, s)) -> s
E assoc: comp(comp(s1, s2), s3) -> comp(s1, comp(s2, s3))
E map: comp(cons(a, s), t) -> cons(a[t], comp(s, t))
E comp_id: comp(s, id) -> s
E var_shift: cons(1, shift) -> id
E scons: cons(1[s], comp(shift, s)) -> s
R dor: eps(dor x y) -> eps(x) \\/ eps(y)
R dnot: eps(dnot x) -> ~eps(x)
R dall: eps(dall x) -> forall y. eps(x y)
goal cantor_function: ~(forall x. forall p. (eps(p (f (g x))) <=> eps(p x)))
goal cantor_relation: ~((forall y. exists g. eps(R g y))
    /\\ (forall x y z. (eps(R x y) => eps(R x z) => forall p. (eps(p y) <=> eps(p z)))))
";

const SET_CORE: &str = "\
sort set
strategy onfly
fun upair(set, set) : set
fun union(set) : set
fun power(set) : set
pred in(set, set)
pred =(set, set)
R pair: w in upair(x, y) -> w = x \\/ w = y
R union: w in union(x) -> exists z. (w in z /\\ z in x)
R power: w in power(x) -> forall y. (y in w => y in x)
";

pub fn set() -> String {
    format!(
        "theory set\n{SET_CORE}const a : set\nsubset f w: ~w in w\n\
         goal crabbe_member: ~f(a) in a\n"
    )
}

pub fn set_cantor() -> String {
    format!(
        "theory set-cantor\n{SET_CORE}\
const B : set
const R : set
const C : set
R cantor: x in C -> x in B /\\ forall y. (<x, y> in R => ~x in y)
axiom E: forall u. (u in power(B) => exists g. (g in B /\\ <g, u> in R))
axiom F: forall x y z. (<x, y> in R => <x, z> in R => y = z)
axiom L: forall z x y. (x = y => ~z in x => ~z in y)
goal cantor: bot
"
    )
}

/// `P_i -> Q_{i+1} \/ P_{i+1}` for `i <= n`, `Q_i -> bot`, `P_{n+1} -> bot`, axiom `P1`.
pub fn chain(n: usize) -> String {
    let mut s = format!("theory chain({n})\n");
    for i in 1..=n + 1 {
        s.push_str(&format!("pred P{i}\n"));
    }
    for i in 2..=n + 1 {
        s.push_str(&format!("pred Q{i}\n"));
    }
    for i in 1..=n {
        s.push_str(&format!("R p{i}: P{i} -> Q{} \\/ P{}\n", i + 1, i + 1));
    }
    for i in 2..=n + 1 {
        s.push_str(&format!("R q{i}: Q{i} -> bot\n"));
    }
    s.push_str(&format!("R p{}: P{} -> bot\n", n + 1, n + 1));
    s.push_str("axiom start: P1\ngoal refute: bot\n");
    s
}

pub const NAMES: &[&str] = &[
    "arith",
    "integral-rings",
    "chain(n)",
    "hol-comb",
    "hol-sigma",
    "set",
    "set-cantor",
];
