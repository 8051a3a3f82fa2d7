#!/usr/bin/env python3
"""Writes the fixture libraries: proof scripts (.v) and traces (.trace).

Usage: python3 fixtures/generate.py [output-dir]
"""

import sys
from pathlib import Path


class Tac:
    def __init__(self, name, args=(), text=None):
        self.name = name
        self.args = list(args)  # (type, role, name)
        self.text = text

    def script(self):
        if self.text is not None:
            return self.text
        names = " ".join(a[2] for a in self.args if a[2])
        if self.name in ("elim", "case", "move :"):
            head = self.name if self.name == "move :" else self.name + " :"
            return f"{head} {names}".strip()
        return f"{self.name} {names}".strip()

    def trace(self):
        parts = [self.name]
        for typ, role, name in self.args:
            field = f"{typ}:{role}"
            if name:
                field += f":{name}"
            parts.append(f"arg {field}")
        return " ".join(parts)


class Step:
    def __init__(self, top, subgoals, tactics, text=None):
        self.top = top
        self.subgoals = subgoals
        self.tactics = tactics
        self.text = text

    def script(self):
        if self.text is not None:
            return self.text
        return "; ".join(t.script() for t in self.tactics)


class Lemma:
    def __init__(self, name, statement, steps, complete=True):
        self.name = name
        self.statement = statement
        self.steps = steps
        self.complete = complete


def build_tree(steps):
    """Each step works on the first open goal; its subgoals are opened in order."""
    nodes = []
    open_goals = [None]
    root = None
    for index, step in enumerate(steps):
        if not open_goals:
            raise ValueError("step with no open goal")
        parent = open_goals.pop(0)
        node = {"step": index, "closed": step.subgoals == 0, "children": []}
        if parent is None:
            root = node
        else:
            parent["children"].append(node)
        nodes.append(node)
        open_goals[0:0] = [node] * step.subgoals
    return root


def tree_text(node):
    inner = [str(node["step"])]
    if node["closed"]:
        inner.append("closed")
    inner += [tree_text(c) for c in node["children"]]
    return "(" + " ".join(inner) + ")"


def write_library(name, lemmas, out_dir, with_script=True):
    trace = [f"library {name}", ""]
    script = []
    for lemma in lemmas:
        trace.append(f"lemma {lemma.name}")
        trace.append(f"statement {lemma.statement}")
        for step in lemma.steps:
            trace.append(f"step top={step.top} subgoals={step.subgoals}")
            for tac in step.tactics:
                trace.append(f"  tactic {tac.trace()}")
        if lemma.complete:
            trace.append(f"tree {tree_text(build_tree(lemma.steps))}")
        elif lemma.steps:
            trace.append(f"tree {tree_text(build_tree(lemma.steps))}")
        trace.append("qed" if lemma.complete else "admitted")
        trace.append("")

        script.append(f"Lemma {lemma.name} : {lemma.statement}.")
        script.append("Proof.")
        for step in lemma.steps:
            script.append(f"  {step.script()}.")
        script.append("Qed." if lemma.complete else "Admitted.")
        script.append("")
    (out_dir / f"{name}.trace").write_text("\n".join(trace))
    if with_script:
        (out_dir / f"{name}.v").write_text("\n".join(script))


# Helpers ---------------------------------------------------------------------

def arg(typ, role="none", name=""):
    return (typ, role, name)


def lem(name):
    return arg("Prop", "lemma", name)


def ih(name="IH"):
    return arg("Prop", "ih", name)


def hyp(typ, name):
    return arg(typ, "hyp", name)


def simpl_trivial(top="equal", subgoals=0):
    return Step(top, subgoals, [Tac("simpl"), Tac("trivial")])


# Plain Coq library ------------------------------------------------------------

def induction_zero_lemmas():
    """Lemmas about 0 and nil proved by induction, two running examples among them."""
    out = []
    for name, stmt, var, typ in [
        ("mult_n_0", "forall n : nat, 0 = n * 0", "n", "nat"),
        ("minus_n_0", "forall n : nat, n - 0 = n", "n", "nat"),
    ]:
        out.append(Lemma(name, stmt, [
            Step("forall", 2, [Tac("induction", [arg(typ, "none", var)])]),
            simpl_trivial(),
            simpl_trivial(),
        ]))
    for name, stmt, var, typ in [
        ("app_l_nil", "forall l : list A, l ++ [] = l", "l", "list"),
        ("plus_n_0", "forall n : nat, n = n + 0", "n", "nat"),
    ]:
        out.append(Lemma(name, stmt, [
            Step("forall", 2, [Tac("induction", [arg(typ, "none", var)])]),
            simpl_trivial(),
            Step("equal", 0, [Tac("simpl"), Tac("rewrite", [ih("IH" + var)]), Tac("trivial")]),
        ]))
    return out


def intro_zero_lemmas():
    """Lemmas about 0 and nil proved by simplification alone."""
    out = []
    for name, stmt, var, typ in [
        ("mult_0_n", "forall n : nat, 0 = 0 * n", "n", "nat"),
        ("app_nil_l", "forall l : list A, [] ++ l = l", "l", "list"),
        ("plus_0_n", "forall n : nat, 0 + n = n", "n", "nat"),
        ("minus_0_n", "forall n : nat, 0 - n = 0", "n", "nat"),
    ]:
        out.append(Lemma(name, stmt, [
            Step("forall", 1, [Tac("intro", [arg(typ, "none", var)])]),
            simpl_trivial(),
        ]))
    return out


def arith_induction_lemmas():
    """Two-variable arithmetic laws: intros, induction, then rewriting."""
    rows = [
        ("plus_comm", "forall n m : nat, n + m = m + n", "plus_n_O", ["plus_n_Sm", "plus_Sn_m"]),
        ("plus_assoc", "forall n m p : nat, n + (m + p) = n + m + p", "plus_O_n",
         ["plus_Sn_m", "plus_n_Sm"]),
        ("mult_comm", "forall n m : nat, n * m = m * n", "mult_n_O", ["mult_n_Sm", "plus_comm"]),
        ("mult_plus_distr_r", "forall n m p : nat, (n + m) * p = n * p + m * p", "plus_O_n",
         ["plus_assoc", "plus_comm"]),
        ("plus_swap", "forall n m p : nat, n + (m + p) = m + (n + p)", "plus_O_n",
         ["plus_comm", "plus_assoc"]),
        ("mult_assoc", "forall n m p : nat, n * (m * p) = n * m * p", "mult_O_n",
         ["mult_plus_distr_r", "mult_comm"]),
        ("plus_n_Sm", "forall n m : nat, S (n + m) = n + S m", "plus_O_n", ["plus_Sn_m", "eq_S"]),
        ("mult_n_Sm", "forall n m : nat, n * m + n = n * S m", "mult_O_n",
         ["plus_comm", "plus_swap"]),
    ]
    out = []
    for name, stmt, base, step in rows:
        out.append(Lemma(name, stmt, [
            Step("forall", 1, [Tac("intros", [arg("nat", "none", "n"), arg("nat", "none", "m")])]),
            Step("forall", 2, [Tac("induction", [arg("nat", "none", "n")])]),
            Step("equal", 0, [Tac("simpl"), Tac("rewrite", [lem(base)]), Tac("trivial")]),
            Step("equal", 1, [Tac("simpl")]),
            Step("equal", 0, [Tac("rewrite", [ih("IHn")] + [lem(s) for s in step])]),
        ]))
    return out


def list_induction_lemmas():
    rows = [
        ("app_assoc", "forall l1 l2 l3 : list A, l1 ++ l2 ++ l3 = (l1 ++ l2) ++ l3"),
        ("app_length", "forall l1 l2 : list A, length (l1 ++ l2) = length l1 + length l2"),
        ("map_app", "forall l1 l2 : list A, map f (l1 ++ l2) = map f l1 ++ map f l2"),
        ("app_comm_cons", "forall (l1 l2 : list A) a, a :: (l1 ++ l2) = (a :: l1) ++ l2"),
        ("rev_length", "forall l : list A, length (rev l) = length l"),
        ("map_length", "forall l : list A, length (map f l) = length l"),
        ("in_app_left", "forall (l1 l2 : list A) a, In a l1 -> In a (l1 ++ l2)"),
        ("fold_right_app",
         "forall l1 l2 : list A, fold_right f i (l1 ++ l2) = fold_right f (fold_right f i l2) l1"),
    ]
    out = []
    for name, stmt in rows:
        out.append(Lemma(name, stmt, [
            Step("forall", 1, [Tac("intros", [arg("list", "none", "l1"), arg("list", "none", "l2")])]),
            Step("forall", 2, [Tac("induction", [arg("list", "none", "l1")])]),
            Step("equal", 0, [Tac("simpl"), Tac("auto")]),
            Step("equal", 1, [Tac("simpl")]),
            Step("equal", 0, [Tac("rewrite", [ih("IHl1")]), Tac("trivial")]),
        ]))
    return out


def order_lemmas():
    """Order facts proved by chaining library lemmas with apply."""
    rows = [
        ("le_S_n_S", "forall n m : nat, n <= m -> S n <= S m", "le_n_S", "le"),
        ("le_trans_S", "forall n m : nat, n <= m -> n <= S m", "le_S", "le"),
        ("le_plus_l", "forall n m : nat, n <= m -> n <= m + n", "le_plus_trans", "le"),
        ("lt_le_weak", "forall n m : nat, n < m -> n <= m", "lt_le_S", "le"),
        ("le_lt_trans_S", "forall n m : nat, n <= m -> n < S m", "le_lt_n_Sm", "lt"),
        ("lt_S_n", "forall n m : nat, S n < S m -> n < m", "lt_S_n_aux", "lt"),
        ("le_pred_n", "forall n m : nat, n <= m -> pred n <= pred m", "le_pred", "le"),
        ("lt_n_Sm_le", "forall n m : nat, n < S m -> n <= m", "lt_n_Sm", "le"),
    ]
    out = []
    for name, stmt, lemma, top in rows:
        out.append(Lemma(name, stmt, [
            Step("forall", 1, [Tac("intros", [arg("nat", "none", "n"), arg("nat", "none", "m"),
                                              arg("Prop", "none", "H")])]),
            Step(top, 1, [Tac("apply", [lem(lemma)])]),
            Step(top, 0, [Tac("apply", [hyp("Prop", "H")])]),
        ]))
    return out


def bool_lemmas():
    """Case analysis on booleans."""
    out = []
    for name, stmt in [
        ("andb_comm", "forall b c : bool, b && c = c && b"),
        ("orb_comm", "forall b c : bool, b || c = c || b"),
        ("xorb_comm", "forall b c : bool, xorb b c = xorb c b"),
        ("andb_negb_r", "forall b c : bool, b && negb c || c = b || c"),
    ]:
        out.append(Lemma(name, stmt, [
            Step("forall", 1, [Tac("intros", [arg("bool", "none", "b"), arg("bool", "none", "c")])]),
            Step("equal", 2, [Tac("destruct", [arg("bool", "none", "b")])]),
            Step("equal", 2, [Tac("destruct", [arg("bool", "none", "c")])]),
            Step("equal", 0, [Tac("trivial")]),
            Step("equal", 0, [Tac("trivial")]),
            Step("equal", 2, [Tac("destruct", [arg("bool", "none", "c")])]),
            Step("equal", 0, [Tac("trivial")]),
            Step("equal", 0, [Tac("trivial")]),
        ]))
    for name, stmt in [
        ("negb_involutive", "forall b : bool, negb (negb b) = b"),
        ("andb_true_r", "forall b : bool, b && true = b"),
        ("orb_false_r", "forall b : bool, b || false = b"),
        ("andb_false_r", "forall b : bool, b && false = false"),
    ]:
        out.append(Lemma(name, stmt, [
            Step("forall", 2, [Tac("destruct", [arg("bool", "none", "b")])]),
            Step("equal", 1, [Tac("simpl")]),
            Step("equal", 0, [Tac("trivial")]),
            Step("equal", 1, [Tac("simpl")]),
            Step("equal", 0, [Tac("trivial")]),
        ]))
    return out


def inversion_lemmas():
    """Inversion on an order hypothesis, remaining goals by automation."""
    rows = [
        ("le_S_inv", "forall n m : nat, S n <= m -> n <= m", "le"),
        ("le_0_inv", "forall n : nat, n <= 0 -> n = 0", "equal"),
        ("lt_0_inv", "forall n : nat, n < 0 -> False", "False"),
        ("le_Sn_0", "forall n : nat, S n <= 0 -> False", "False"),
        ("in_nil_inv", "forall a : A, In a [] -> False", "False"),
        ("le_S_S_inv", "forall n m : nat, S n <= S m -> n <= m", "le"),
        ("lt_S_inv", "forall n m : nat, S n < m -> n < m", "lt"),
        ("le_n_0_eq", "forall n : nat, n <= 0 -> 0 = n", "equal"),
    ]
    out = []
    for name, stmt, top in rows:
        out.append(Lemma(name, stmt, [
            Step("forall", 1, [Tac("intros", [arg("nat", "none", "n"), arg("Prop", "none", "H")])]),
            Step(top, 2, [Tac("inversion", [hyp("Prop", "H")])]),
            Step(top, 0, [Tac("auto")]),
            Step(top, 0, [Tac("auto")]),
        ]))
    return out


def list_case_lemmas():
    """Case analysis on a list, the cons case refuted."""
    rows = [
        ("length_zero_nil", "forall l : list A, length l = 0 -> l = []"),
        ("tl_nil_length", "forall l : list A, length (tl l) = 0 -> length l <= 1"),
        ("hd_error_nil", "forall l : list A, hd_error l = None -> l = []"),
        ("rev_unit_nil", "forall l : list A, rev l = [] -> l = []"),
        ("nth_error_nil", "forall l : list A, nth_error l 0 = None -> l = []"),
        ("app_eq_nil_l", "forall l1 l2 : list A, l1 ++ l2 = [] -> l1 = []"),
        ("map_eq_nil", "forall l : list A, map f l = [] -> l = []"),
        ("last_nil_d", "forall (l : list A) d, length l = 0 -> last l d = d"),
    ]
    out = []
    for name, stmt in rows:
        out.append(Lemma(name, stmt, [
            Step("forall", 2, [Tac("case", [arg("list", "none", "l")])]),
            Step("forall", 1, [Tac("intros", [arg("Prop", "none", "H")])]),
            Step("equal", 0, [Tac("trivial")]),
            Step("forall", 1, [Tac("intros", [arg("A", "none", "a"), arg("list", "none", "l0"),
                                              arg("Prop", "none", "H")])]),
            Step("False", 0, [Tac("discriminate", [hyp("Prop", "H")])]),
        ]))
    return out


def long_induction_lemmas():
    """Inefficient proofs: induction with repeated simplification and automation."""
    rows = [
        ("mult_1_r_long", "forall n : nat, n * 1 = n", ["plus_n_O"]),
        ("mult_2_double", "forall n : nat, 2 * n = n + n", ["plus_n_O", "plus_comm"]),
        ("double_plus", "forall n : nat, double n = n + n", ["plus_n_Sm"]),
        ("minus_diag_long", "forall n : nat, n - n = 0", ["minus_n_O"]),
        ("pred_succ_long", "forall n : nat, pred (S n) = n", ["pred_Sn"]),
        ("plus_1_S_long", "forall n : nat, n + 1 = S n", ["plus_n_Sm", "plus_n_O"]),
        ("mult_S_long", "forall n m : nat, n * S m = n + n * m", ["plus_swap"]),
        ("even_double_long", "forall n : nat, even (double n) = true", ["double_S"]),
    ]
    out = []
    for name, stmt, lemmas in rows:
        out.append(Lemma(name, stmt, [
            Step("forall", 2, [Tac("induction", [arg("nat", "none", "n")])]),
            Step("equal", 1, [Tac("simpl")]),
            Step("equal", 0, [Tac("auto")]),
            Step("equal", 1, [Tac("simpl")]),
            Step("equal", 1, [Tac("rewrite", [ih("IHn")])]),
            Step("equal", 1, [Tac("rewrite", [lem(l) for l in lemmas])]),
            Step("equal", 0, [Tac("auto")]),
        ]))
    return out


def rewrite_lemmas():
    """Equalities obtained by rewriting with earlier results only."""
    rows = [
        ("plus_comm_3", "forall n m p : nat, n + m + p = p + m + n", ["plus_comm", "plus_assoc"]),
        ("mult_comm_3", "forall n m p : nat, n * m * p = p * m * n", ["mult_comm", "mult_assoc"]),
        ("plus_rotate", "forall n m p : nat, n + (m + p) = p + (n + m)", ["plus_swap", "plus_comm"]),
        ("mult_distr_l", "forall n m p : nat, n * (m + p) = n * m + n * p",
         ["mult_comm", "mult_plus_distr_r"]),
        ("app_assoc_4", "forall l1 l2 l3 l4 : list A, l1 ++ l2 ++ l3 ++ l4 = ((l1 ++ l2) ++ l3) ++ l4",
         ["app_assoc", "app_assoc"]),
        ("length_app_comm", "forall l1 l2 : list A, length (l1 ++ l2) = length (l2 ++ l1)",
         ["app_length", "plus_comm"]),
    ]
    out = []
    for name, stmt, lemmas in rows:
        out.append(Lemma(name, stmt, [
            Step("forall", 1, [Tac("intros", [arg("nat", "none", "n"), arg("nat", "none", "m")])]),
            Step("equal", 1, [Tac("rewrite", [lem(lemmas[0])])]),
            Step("equal", 1, [Tac("rewrite", [lem(lemmas[1])])]),
            Step("equal", 0, [Tac("trivial")]),
        ]))
    return out


def initial_library():
    return (induction_zero_lemmas() + intro_zero_lemmas() + arith_induction_lemmas() +
            list_induction_lemmas() + order_lemmas() + bool_lemmas() + inversion_lemmas() +
            list_case_lemmas() + long_induction_lemmas() + rewrite_lemmas())


# SSReflect bigop-style library ------------------------------------------------

def rw(*names, top="equal", subgoals=0, text=None):
    args = [ih(n) if n.startswith("IH") else hyp("Prop", n) if n == "H" else lem(n)
            for n in names]
    return Step(top, subgoals, [Tac("rewrite", args)], text)


def intro(*pairs, top="forall", subgoals=1):
    return Step(top, subgoals, [Tac("move =>", [arg(t, "none", n) for t, n in pairs])])


def elim_n(var="n", typ="nat", top="equal"):
    return Step(top, 2, [Tac("elim", [hyp(typ, var)])])


def sum_first_n():
    return Lemma("sum_first_n", "forall n, 2 * (\\sum_(0 <= i < n.+1) i) = n * n.+1", [
        elim_n(),
        rw("mul0n", "big_nat1", "muln0"),
        intro(("nat", "n"), ("Prop", "IH")),
        rw("big_nat_recr", "mulnDr", "IH", "mulnDl", "addn2", "mulnC",
           text="rewrite big_nat_recr mulnDr IH -mulnDl addn2 mulnC"),
    ])


def sum_first_n_odd():
    return Lemma("sum_first_n_odd",
                 "forall n, \\sum_(0 <= i < n.*2 | odd i) i = n ^ 2", [
        elim_n(),
        rw("exp0n", "index_iota", "subn0", "big1_seq", subgoals=1,
           text="rewrite exp0n // /index_iota subn0 big1_seq //"),
        Step("forall", 0, [
            Tac("move =>", [arg("nat", "none", "i")]),
            Tac("move/", [lem("andP"), arg("Prop", "none", "H2")], "move/andP => [_ H2]"),
            Tac("move :", [hyp("Prop", "H2")]),
            Tac("rewrite", [lem("muln0"), lem("in_nil")]),
        ]),
        intro(("nat", "n"), ("Prop", "IH")),
        rw("big_mkcond", "addn1", "mulnDr", "muln1", "addn2", "big_nat_recr", "IH", "odd2n",
           "odd2n1", "addn0", "n1square", "n2square",
           text="rewrite big_mkcond -[n.+1]addn1 mulnDr muln1 addn2 !big_nat_recr IH odd2n "
                "odd2n1 //= addn0 n1square n2square"),
    ])


def fact_prod():
    return Lemma("fact_prod", "forall n, \\prod_(1 <= i < n.+1) i = n`!", [
        elim_n(),
        rw("big_nil"),
        intro(("nat", "n"), ("Prop", "IH")),
        rw("factS", "big_add1", "IH", "big_add1", "big_nat_recr", "mulnC",
           text="rewrite factS big_add1 -IH big_add1 big_nat_recr mulnC"),
    ])


def sum_first_n_partial():
    """The first two steps of sum_first_n, as an unfinished development."""
    full = sum_first_n()
    return Lemma(full.name, full.statement, full.steps[:2], complete=False)


SERIES_LEMMAS = [
    "big_nat_recl", "big_ord_recr", "big_geq", "big_ltn", "big_mkord", "big_split",
    "big_distrr", "big_distrl", "sum_nat_const", "prod_nat_const", "expnS", "expn1",
    "mulnA", "addnA", "addnC", "mulSn", "mul2n", "doubleS", "sqrnD", "odd_double",
]


def series_sum_lemmas():
    """Series proved by induction whose base case needs a side condition."""
    rows = [
        ("sum_squares", "forall n, 6 * (\\sum_(i < n.+1) i ^ 2) = n * n.+1 * (n.*2).+1"),
        ("sum_cubes", "forall n, 4 * (\\sum_(i < n.+1) i ^ 3) = (n * n.+1) ^ 2"),
        ("sum_even", "forall n, \\sum_(0 <= i < n.*2 | ~~ odd i) i = n * n.-1"),
        ("sum_geom2", "forall n, \\sum_(i < n) 2 ^ i = (2 ^ n).-1"),
        ("sum_const_n", "forall n c, \\sum_(i < n) c = n * c"),
        ("sum_odd_sq", "forall n, \\sum_(i < n | odd i) i ^ 2 = n * (n.*2).+1 %/ 6"),
        ("sum_triangle", "forall n, \\sum_(i < n.+1) i * i.+1 = n * n.+1 * n.+2 %/ 3"),
        ("sum_pow2_succ", "forall n, (\\sum_(i < n.+1) 2 ^ i).+1 = 2 ^ n.+1"),
    ]
    out = []
    for index, (name, stmt) in enumerate(rows):
        a = SERIES_LEMMAS[index % len(SERIES_LEMMAS)]
        b = SERIES_LEMMAS[(index + 5) % len(SERIES_LEMMAS)]
        c = SERIES_LEMMAS[(index + 11) % len(SERIES_LEMMAS)]
        out.append(Lemma(name, stmt, [
            elim_n(),
            rw("big_nat1", a, subgoals=1),
            Step("equal", 0, [Tac("done")]),
            intro(("nat", "n"), ("Prop", "IH")),
            rw("big_nat_recr", "IH", b, c),
        ]))
    return out


def series_prod_lemmas():
    """Products over ranges, induction with the names introduced in one step."""
    rows = [
        ("prod_const_n", "forall n c, \\prod_(i < n) c = c ^ n"),
        ("prod_pow2", "forall n, \\prod_(i < n) 2 = 2 ^ n"),
        ("prod_fact_gt0", "forall n, 0 < \\prod_(1 <= i < n.+1) i"),
        ("prod_id_fact", "forall n, \\prod_(i < n) i.+1 = n`!"),
        ("prod_expn", "forall n m, \\prod_(i < n) m ^ i = m ^ (\\sum_(i < n) i)"),
        ("prod_odd_fact", "forall n, \\prod_(i < n) (i.*2).+1 * 2 ^ n * n`! = (n.*2)`!"),
    ]
    out = []
    for index, (name, stmt) in enumerate(rows):
        a = SERIES_LEMMAS[(index + 3) % len(SERIES_LEMMAS)]
        out.append(Lemma(name, stmt, [
            Step("forall", 2, [Tac("elim", [hyp("nat", "n")])], "elim : n => [|n IH]"),
            Step("equal", 0, [Tac("rewrite", [lem("big_nil"), lem(a)]), Tac("done")]),
            rw("big_nat_recr", "IH", a),
        ]))
    return out


BIG_LEMMAS = [
    "big_nil", "big_cons", "big_seq1", "big_cat", "big_map", "big_filter", "big_pred0",
    "big_pred1", "big_hasC", "big_const", "big_const_nat", "big_const_ord", "big_ord0",
    "big_ord1", "big_ord_narrow", "big_ord_widen", "big_nat_widen", "big_mkcondr",
    "big_mkcondl", "big_andbC", "big_rem", "big_undup", "big_enum", "big_image",
    "big_tnth", "big_uniq", "big_rmcond", "big_setID", "big_pair", "big_flatten",
    "eq_bigl", "eq_bigr", "eq_big", "eq_big_nat", "eq_big_seq", "congr_big",
    "reindex", "reindex_inj", "partition_big", "pair_big", "exchange_big",
    "bigID", "bigU", "bigD1", "bigA_distr", "bigA_distr_big", "prodn_gt0",
    "leq_sum", "sum_nat_eq0", "leqif_sum", "addnCA", "muln1", "mul1n", "add0n",
    "addn0", "subnn", "subn0", "leqnn", "ltnS", "leq_add", "leq_mul", "eqxx",
    "andbT", "orbF", "negbK", "unlock", "binS", "bin0", "bin1", "binn", "bin_gt0",
    "bin_fact", "bin_sub", "leq_bin2l", "mul_bin_diag", "mul_bin_down", "mul_bin_left",
    "factS", "fact_gt0", "expn_addr", "expnM", "expn0", "exp1n", "ffactnn", "ffact_fact",
]


def pick(index, offset):
    return BIG_LEMMAS[(index * 7 + offset) % len(BIG_LEMMAS)]


def picks(index, offset, count):
    return [pick(index, offset + 3 * j) for j in range(count)]


def unlock_lemmas(count):
    """One-line proofs by rewriting."""
    out = []
    for i in range(count):
        out.append(Lemma(f"big_unfold_{i}", f"big_unfold_stmt {i}", [rw(pick(i, 0))]))
    return out


def congruence_lemmas(count):
    """Congruence of big operators: apply a congruence lemma, then rewrite the term."""
    out = []
    for i in range(count):
        out.append(Lemma(f"big_congr_{i}", f"big_congr_stmt {i}", [
            Step("equal", 1, [Tac("apply", [lem(pick(i, 30))])]),
            intro(("nat", "i"), ("Prop", "_")),
            rw(*picks(i, 2, 2 + i % 3)),
        ]))
    return out


def seq_induction_lemmas(count):
    """Induction on sequences."""
    out = []
    for i in range(count):
        out.append(Lemma(f"big_seq_ind_{i}", f"big_seq_ind_stmt {i}", [
            Step("forall", 2, [Tac("elim", [hyp("seq", "r")])], "elim : r => [|x r IHr]"),
            Step("equal", 0, [Tac("rewrite", [lem(x) for x in ["big_nil"] + picks(i, 1, 1 + i % 3)]),
                              Tac("done")]),
            rw("big_cons", "IHr", *picks(i, 5, 4 + i % 4)),
        ]))
    return out


ORDER_TOPS = ["leq", "ltn", "dvdn", "eqn", "coprime", "prime", "odd", "orb"]


def case_lemmas(count):
    """Case analysis on a natural number."""
    out = []
    for i in range(count):
        top = ORDER_TOPS[i % len(ORDER_TOPS)]
        out.append(Lemma(f"big_case_{i}", f"big_case_stmt {i}", [
            Step("forall", 2, [Tac("case", [arg("nat", "none", "n")])]),
            rw(*picks(i, 1, 2 + i % 2), top=top),
            Step(top, 1 + i % 5, [Tac("move =>", [arg("nat", "none", "n")])] +
                 [Tac("rewrite", [lem(pick(i, 4))])] * (1 + i % 4)),
            Step(top, 1, [Tac("rewrite", [lem(x) for x in picks(i, 8, 5 + i % 3)])] +
                 [Tac("apply", [lem(pick(i, 12))])] * (i % 2) + [Tac("done")] * (i % 3 == 0)),
            Step(top, 0, [Tac("done")]),
        ] + [Step(top, 0, [Tac("done")])] * (i % 5)))
    return out


MOVE_TOPS = ["equal", "leq", "ltn", "dvdn", "in", "and", "eqb"]


def move_rewrite_lemmas(count):
    """Introduce, rewrite, conclude with an applied lemma."""
    out = []
    for i in range(count):
        out.append(Lemma(f"big_move_{i}", f"big_move_stmt {i}", [
            intro(("nat", "m"), ("nat", "n")),
            rw(*picks(i, 3, 3 + i % 3), subgoals=1),
            Step(MOVE_TOPS[i % len(MOVE_TOPS)], 0, [Tac("apply", [lem(pick(i, 40))])]),
        ]))
    return out


def binomial_lemmas(count):
    """Double induction on binomial coefficients."""
    out = []
    for i in range(count):
        out.append(Lemma(f"bin_ind_{i}", f"bin_ind_stmt {i}", [
            Step("forall", 2, [Tac("elim", [hyp("nat", "n")])]),
            Step("equal", 0, [Tac("case", [arg("nat", "none", "m")]), Tac("done")]),
            intro(("nat", "n"), ("Prop", "IHn")),
            Step("forall", 2, [Tac("case", [arg("nat", "none", "m")])]),
            Step(ORDER_TOPS[(i + 5) % len(ORDER_TOPS)], 0, [Tac("rewrite", [lem("bin0")] + [lem(x) for x in picks(i, 11, 1 + i % 3)])] +
                 [Tac("case", [arg("nat", "none", "m")]), Tac("done")][:i % 3]),
            rw("binS", "IHn", *picks(i, 23, 5 + i % 4)),
        ]))
    return out


def leq_lemmas(count):
    """Order facts through a case split on a disjunction."""
    out = []
    for i in range(count):
        out.append(Lemma(f"big_leq_{i}", f"big_leq_stmt {i}", [
            intro(("nat", "m"), ("nat", "n")),
            rw("leq_eqVlt", top="leq", subgoals=1),
            Step("or", 2, [Tac("case", [arg("Prop", "none", "orP")], "case/orP => H")] +
                 [Tac("move :", [hyp("Prop", "H")]), Tac("move =>", [arg("Prop", "none", "H")])] * (i % 3),
                 ),
            Step("leq", 0, [Tac("rewrite", [hyp("Prop", "H")] +
                                [lem(x) for x in picks(i, 4, 4 + i % 4)])] +
                 [Tac("rewrite", [lem(pick(i, 9))]), Tac("done")] * (i % 3)),
            rw("H", *picks(i, 19, 5 + i % 3), top=ORDER_TOPS[(i + 3) % len(ORDER_TOPS)]),
        ]))
    return out


def view_lemmas(count):
    """Reflection views on a hypothesis."""
    out = []
    for i in range(count):
        out.append(Lemma(f"big_view_{i}", f"big_view_stmt {i}", [
            Step("forall", 1, [Tac("move/", [lem("eqP"), arg("Prop", "none", "H")])],
                 "move/eqP => H"),
            rw("H", *picks(i, 6, 1 + i % 3), subgoals=1),
            Step("equal", 0, [Tac("done")]),
        ]))
    return out


def bigop_library():
    return ([sum_first_n(), sum_first_n_odd(), fact_prod()] + series_sum_lemmas() +
            series_prod_lemmas() + unlock_lemmas(25) + congruence_lemmas(25) +
            seq_induction_lemmas(25) + case_lemmas(25) + move_rewrite_lemmas(25) +
            binomial_lemmas(25) + leq_lemmas(25) + view_lemmas(13))


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent
    out_dir.mkdir(parents=True, exist_ok=True)
    write_library("Initial", initial_library(), out_dir)
    write_library("bigop", bigop_library(), out_dir)
    write_library("series", [sum_first_n(), sum_first_n_odd(), fact_prod()], out_dir)
    write_library("sum_first_n_partial", [sum_first_n_partial()], out_dir)


if __name__ == "__main__":
    main()
