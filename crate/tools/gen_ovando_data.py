#!/usr/bin/env python3
"""Builds data/ovando4d.json: structure constants of the four-dimensional
symplectic Lie algebras transcribed from G. Ovando, "Four dimensional
symplectic Lie algebras" (Beitr. Algebra Geom. 47 (2006), no. 2, 419-434),
Proposition 2.4 and Section 1 notation, together with the symplectic forms,
expected i.s.t. derivation families and (for the Kaehler rows) complex
structures of the five-dimensional classification tables."""

import json

OV = "Ovando, Four dimensional symplectic Lie algebras, Prop. 2.4"


def mat(entries, n=4):
    """entries: list of (row, col, value-string); row-major string matrix."""
    m = [["0"] * n for _ in range(n)]
    for r, c, v in entries:
        m[r][c] = v
    return m


def mono(c, *vars):
    return {"c": c, "vars": list(vars)}


def poly(base, *terms):
    out = {"terms": list(terms)}
    if base != "0":
        out["base"] = base
    return out


def param(name, lo=None, lo_closed=False, hi=None, hi_closed=False, exclude=()):
    p = {"name": name}
    if lo is not None:
        p["min"] = lo
        p["min_closed"] = lo_closed
    if hi is not None:
        p["max"] = hi
        p["max_closed"] = hi_closed
    if exclude:
        p["exclude"] = list(exclude)
    return p


def row(name, table, prov, brackets, omega, family_params, family, *,
        params=(), j=None, sak=False):
    r = {
        "name": name,
        "table": table,
        "provenance": prov,
        "dim": 4,
        "brackets": brackets,
        "omega": omega,
        "family": {"params": family_params, "matrices": family},
    }
    if params:
        r["params"] = list(params)
    if j is not None:
        r["j"] = j
    if sak:
        r["strictly_almost_kahler"] = True
    return r


def br(i, j, *out):
    return {"i": i, "j": j, "out": [[k, c] for k, c in out]}


def om(*terms):
    return [{"idx": [i, j], "c": c} for i, j, c in terms]


rows = []

# --- base algebras (1-based indices, [e_i, e_j] entries for i < j) -----------
B = {
    "rh3": [br(1, 2, (3, "1"))],
    "rr3_0": [br(1, 2, (2, "1"))],
    "rr3_m1": [br(1, 2, (2, "1")), br(1, 3, (3, "-1"))],
    "rrp3_0": [br(1, 2, (3, "-1")), br(1, 3, (2, "1"))],
    "r2r2": [br(1, 2, (2, "1")), br(3, 4, (4, "1"))],
    "r2prime": [br(1, 3, (3, "1")), br(1, 4, (4, "1")),
                br(2, 3, (4, "1")), br(2, 4, (3, "-1"))],
    "n4": [br(1, 4, (2, "-1")), br(2, 4, (3, "-1"))],
    "r4_0": [br(1, 4, (1, "-1")), br(3, 4, (2, "-1"))],
    "r4_m1": [br(1, 4, (1, "-1")), br(2, 4, (2, "1")),
              br(3, 4, (2, "-1"), (3, "1"))],
    "r4_beta": [br(1, 4, (1, "-1")), br(2, 4, (2, "1")),
                br(3, 4, (3, poly("0", mono("-1", "beta"))))],
    "r4_beta_m1": [br(1, 4, (1, "-1")), br(2, 4, (2, "1")), br(3, 4, (3, "1"))],
    "r4_alpha": [br(1, 4, (1, "-1")),
                 br(2, 4, (2, poly("0", mono("-1", "abar")))),
                 br(3, 4, (3, poly("0", mono("1", "abar"))))],
    "rp4_delta": [br(1, 4, (1, "-1")),
                  br(2, 4, (3, poly("0", mono("1", "delta")))),
                  br(3, 4, (2, poly("0", mono("-1", "delta"))))],
    "d4_1": [br(1, 2, (3, "1")), br(1, 4, (1, "-1")), br(3, 4, (3, "-1"))],
    "d4_2": [br(1, 2, (3, "1")), br(1, 4, (1, "-2")), br(2, 4, (2, "1")),
             br(3, 4, (3, "-1"))],
    "d4_lambda": [br(1, 2, (3, "1")),
                  br(1, 4, (1, poly("0", mono("-1", "lambda")))),
                  br(2, 4, (2, poly("-1", mono("1", "lambda")))),
                  br(3, 4, (3, "-1"))],
    "d4_half": [br(1, 2, (3, "1")), br(1, 4, (1, "-1/2")),
                br(2, 4, (2, "-1/2")), br(3, 4, (3, "-1"))],
    "dp4_delta": [br(1, 2, (3, "1")),
                  br(1, 4, (1, poly("0", mono("-1/2", "delta"))), (2, "1")),
                  br(2, 4, (1, "-1"), (2, poly("0", mono("-1/2", "delta")))),
                  br(3, 4, (3, poly("0", mono("-1", "delta"))))],
    "h4": [br(1, 2, (3, "1")), br(1, 4, (1, "-1/2")),
           br(2, 4, (1, "-1"), (2, "-1/2")), br(3, 4, (3, "-1"))],
}

prov = {
    "rh3": f"rh3 = R x h3: [e1,e2]=e3 ({OV})",
    "rr3_0": f"rr3,0 = R x r3,0: [e1,e2]=e2 ({OV})",
    "rr3_m1": f"rr3,-1 = R x r3,-1: [e1,e2]=e2, [e1,e3]=-e3 ({OV})",
    "rrp3_0": f"rr'3,0 = R x r'3,0: [e1,e2]=-e3, [e1,e3]=e2 ({OV})",
    "r2r2": f"r2 x r2: [e1,e2]=e2, [e3,e4]=e4 ({OV})",
    "r2prime": f"r'2 = aff(C): [e1,e3]=e3, [e1,e4]=e4, [e2,e3]=e4, [e2,e4]=-e3 ({OV})",
    "n4": f"n4: [e4,e1]=e2, [e4,e2]=e3 ({OV})",
    "r4_0": f"r4,0: [e4,e1]=e1, [e4,e3]=e2 ({OV})",
    "r4_m1": f"r4,-1: [e4,e1]=e1, [e4,e2]=-e2, [e4,e3]=e2-e3 ({OV})",
    "r4_beta": f"r4,-1,b: [e4,e1]=e1, [e4,e2]=-e2, [e4,e3]=b e3, -1<b<0 ({OV})",
    "r4_beta_m1": f"r4,-1,-1: [e4,e1]=e1, [e4,e2]=-e2, [e4,e3]=-e3 ({OV})",
    "r4_alpha": f"r4,a,-a: [e4,e1]=e1, [e4,e2]=a e2, [e4,e3]=-a e3, -1<a<0 ({OV})",
    "rp4_delta": f"r'4,0,d: [e4,e1]=e1, [e4,e2]=-d e3, [e4,e3]=d e2, d>0 ({OV})",
    "d4_1": f"d4,1: [e1,e2]=e3, [e4,e1]=e1, [e4,e3]=e3 ({OV})",
    "d4_2": f"d4,2: [e1,e2]=e3, [e4,e1]=2e1, [e4,e2]=-e2, [e4,e3]=e3 ({OV})",
    "d4_lambda": f"d4,l: [e1,e2]=e3, [e4,e1]=l e1, [e4,e2]=(1-l)e2, [e4,e3]=e3 ({OV})",
    "d4_half": f"d4,1/2: [e1,e2]=e3, [e4,e1]=e1/2, [e4,e2]=e2/2, [e4,e3]=e3 ({OV})",
    "dp4_delta": f"d'4,d: [e1,e2]=e3, [e4,e1]=(d/2)e1-e2, [e4,e2]=e1+(d/2)e2, [e4,e3]=d e3, d>0 ({OV})",
    "h4": f"h4: [e1,e2]=e3, [e4,e3]=e3, [e4,e1]=e1/2, [e4,e2]=e1+e2/2 ({OV})",
}


def t1(name, base, omega, fparams, family, *, params=(), sak=False, suffix=""):
    rows.append(row(name + suffix, 1,
                    prov[base] + "; symplectic form and i.s.t. family per the 5D cosymplectic table",
                    B[base], omega, fparams, family, params=params, sak=sak))


# --- Table 1 -----------------------------------------------------------------

t1("rh3", "rh3", om((1, 4, "1"), (2, 3, "1")),
   ["p", "q", "r", "s", "t"],
   {
       "p": mat([(0, 0, "2"), (1, 1, "-1"), (2, 2, "1"), (3, 3, "-2")]),
       "q": mat([(2, 0, "1"), (3, 1, "1")]),
       "r": mat([(3, 0, "1")]),
       "s": mat([(0, 1, "1"), (2, 3, "-1")]),
       "t": mat([(2, 1, "1")]),
   }, sak=True)

t1("rr3_0", "rr3_0", om((1, 2, "1"), (3, 4, "1")),
   ["p", "q", "r", "s"],
   {
       "p": mat([(1, 0, "1")]),
       "q": mat([(2, 2, "1"), (3, 3, "-1")]),
       "r": mat([(3, 2, "1")]),
       "s": mat([(2, 3, "1")]),
   })

t1("rr3_m1", "rr3_m1", om((1, 4, "1"), (2, 3, "1")),
   ["p", "q"],
   {
       "p": mat([(3, 0, "1")]),
       "q": mat([(1, 1, "1"), (2, 2, "-1")]),
   }, sak=True)

t1("rrp3_0", "rrp3_0", om((1, 4, "1"), (2, 3, "1")),
   ["p", "q"],
   {
       "p": mat([(3, 0, "1")]),
       "q": mat([(2, 1, "1"), (1, 2, "-1")]),
   })

rows.append(row("r2r2", 1,
                prov["r2r2"] + "; symplectic form e12 + l e13 + e34, l >= 0",
                B["r2r2"],
                [{"idx": [1, 2], "c": "1"},
                 {"idx": [1, 3], "c": poly("0", mono("1", "l"))},
                 {"idx": [3, 4], "c": "1"}],
                ["p", "q"],
                {
                    "p": mat([(1, 0, "1")]),
                    "q": mat([(3, 2, "1")]),
                },
                params=[param("l", lo="0", lo_closed=True)]))

t1("r2prime_ov", "r2prime", om((1, 4, "1"), (2, 3, "1")),
   ["p", "q"],
   {
       "p": mat([(2, 0, "1"), (3, 1, "1")]),
       "q": mat([(3, 0, "1"), (2, 1, "-1")]),
   }, sak=True)

t1("n4", "n4", om((1, 2, "1"), (3, 4, "1")),
   ["p", "q", "r"],
   {
       "p": mat([(1, 0, "1"), (2, 1, "1"), (0, 3, "1")]),
       "q": mat([(2, 0, "1"), (1, 3, "-1")]),
       "r": mat([(2, 3, "1")]),
   }, sak=True)

for suffix, eps in (("_ep", "1"), ("_em", "-1")):
    t1("r4_0", "r4_0", om((1, 4, "1"), (2, 3, eps)),
       ["p", "q"],
       {
           "p": mat([(1, 2, "1")]),
           "q": mat([(0, 3, "1")]),
       }, sak=True, suffix=suffix)

t1("r4_m1", "r4_m1", om((1, 3, "1"), (2, 4, "1")),
   ["p", "q"],
   {
       "p": mat([(1, 2, "1"), (0, 3, "1")]),
       "q": mat([(1, 3, "1")]),
   }, sak=True)

t1("r4_beta", "r4_beta", om((1, 2, "1"), (3, 4, "1")),
   ["p", "r"],
   {
       "p": mat([(0, 0, "1"), (1, 1, "-1")]),
       "r": mat([(2, 3, "1")]),
   },
   params=[param("beta", lo="-1", hi="0")], sak=True)

t1("r4_beta_m1", "r4_beta_m1", om((1, 2, "1"), (3, 4, "1")),
   ["p", "q", "r"],
   {
       "p": mat([(0, 0, "1"), (1, 1, "-1")]),
       "q": mat([(2, 1, "1"), (0, 3, "1")]),
       "r": mat([(2, 3, "1")]),
   }, sak=True)

t1("r4_alpha", "r4_alpha", om((1, 4, "1"), (2, 3, "1")),
   ["p", "q"],
   {
       "p": mat([(1, 1, "1"), (2, 2, "-1")]),
       "q": mat([(0, 3, "1")]),
   },
   params=[param("abar", lo="-1", hi="0")], sak=True)

for suffix, eps in (("_ep", "1"), ("_em", "-1")):
    t1("rp4_delta", "rp4_delta", om((1, 4, "1"), (2, 3, eps)),
       ["p", "q"],
       {
           "p": mat([(2, 1, "1"), (1, 2, "-1")]),
           "q": mat([(0, 3, "1")]),
       },
       params=[param("delta", lo="0")], suffix=suffix)

t1("d4_1", "d4_1", om((1, 2, "1"), (3, 4, "-1")),
   ["p", "q", "r"],
   {
       "p": mat([(0, 0, "1"), (1, 1, "-1")]),
       "q": mat([(2, 1, "1"), (0, 3, "-1")]),
       "r": mat([(2, 3, "1")]),
   }, sak=True, suffix="_e0")

t1("d4_1", "d4_1", om((1, 2, "1"), (3, 4, "-1"), (2, 4, "1")),
   ["q", "r"],
   {
       "q": mat([(2, 1, "1"), (0, 3, "-1")]),
       "r": mat([(2, 3, "1")]),
   }, sak=True, suffix="_e1")

t1("d4_2", "d4_2", om((1, 2, "1"), (3, 4, "-1")),
   ["p", "q"],
   {
       "p": mat([(0, 0, "1"), (1, 1, "-1")]),
       "q": mat([(2, 3, "1")]),
   }, suffix="_a")

for suffix, eps in (("_b_ep", "1"), ("_b_em", "-1")):
    t1("d4_2", "d4_2", om((1, 4, "1"), (2, 3, eps)),
       ["p"],
       {
           "p": mat([(2, 1, "1"), (0, 3, "-2")]),
       }, suffix=suffix)

t1("d4_lambda", "d4_lambda", om((1, 2, "1"), (3, 4, "-1")),
   ["p", "s"],
   {
       "p": mat([(0, 0, "1"), (1, 1, "-1")]),
       "s": mat([(2, 3, "1")]),
   },
   params=[param("lambda", lo="1/2", exclude=("1", "2"))], sak=True)

t1("d4_half", "d4_half", om((1, 2, "1"), (3, 4, "-1")),
   ["p", "q", "r", "s"],
   {
       "p": mat([(0, 0, "1"), (1, 1, "-1")]),
       "q": mat([(1, 0, "1")]),
       "r": mat([(0, 1, "1")]),
       "s": mat([(2, 3, "1")]),
   })

for suffix, eps in (("_ep", "1"), ("_em", "-1")):
    neg = "-1" if eps == "1" else "1"
    rows.append(row("dp4_delta" + suffix, 1,
                    prov["dp4_delta"] + "; symplectic form eps(e12 - d e34)",
                    B["dp4_delta"],
                    [{"idx": [1, 2], "c": eps},
                     {"idx": [3, 4], "c": poly("0", mono(neg, "delta"))}],
                    ["p", "q"],
                    {
                        "p": mat([(1, 0, "1"), (0, 1, "-1")]),
                        "q": mat([(2, 3, "1")]),
                    },
                    params=[param("delta", lo="0")]))

for suffix, eps, meps in (("_ep", "1", "-1"), ("_em", "-1", "1")):
    t1("h4", "h4", om((1, 2, eps), (3, 4, meps)),
       ["p", "q"],
       {
           "p": mat([(0, 1, "1")]),
           "q": mat([(2, 3, "1")]),
       }, sak=True, suffix=suffix)

# --- Table 2 -----------------------------------------------------------------

def omp(*terms):
    """omega with parameter coefficients: terms (i, j, paramname) or (i, j, spec)."""
    out = []
    for i, j, c in terms:
        spec = poly("0", mono("1", c)) if isinstance(c, str) else c
        out.append({"idx": [i, j], "c": spec})
    return out


def t2(name, base, omega, j, fparams, family, *, params, note):
    rows.append(row(name, 2,
                    prov[base] + "; Kaehler data and commuting i.s.t. family per the 5D coKaehler table" + note,
                    B[base], omega, fparams, family, params=params, j=j))


J_12_34 = mat([(1, 0, "1"), (0, 1, "-1"), (3, 2, "1"), (2, 3, "-1")])      # Je1=e2, Je3=e4
J_14_23 = mat([(3, 0, "1"), (0, 3, "-1"), (2, 1, "1"), (1, 2, "-1")])      # Je1=e4, Je2=e3
J_41_23 = mat([(0, 3, "1"), (3, 0, "-1"), (2, 1, "1"), (1, 2, "-1")])      # Je4=e1, Je2=e3
J_41_32 = mat([(0, 3, "1"), (3, 0, "-1"), (1, 2, "1"), (2, 1, "-1")])      # Je4=e1, Je3=e2
J_12_43 = mat([(1, 0, "1"), (0, 1, "-1"), (2, 3, "1"), (3, 2, "-1")])      # Je1=e2, Je4=e3
J_21_34 = mat([(0, 1, "1"), (1, 0, "-1"), (3, 2, "1"), (2, 3, "-1")])      # Je2=e1, Je3=e4

neg_param = lambda p: param(p, hi="0")
pos_param = lambda p: param(p, lo="0")

rot34 = {"p": mat([(3, 2, "-1"), (2, 3, "1")])}   # De3=-p e4, De4=p e3
rot23 = {"p": mat([(2, 1, "-1"), (1, 2, "1")])}   # De2=-p e3, De3=p e2
rot12 = {"p": mat([(1, 0, "-1"), (0, 1, "1")])}   # De1=-p e2, De2=p e1

t2("t2_rr3_0", "rr3_0",
   omp((1, 2, "a12"), (3, 4, "a34")), J_12_34,
   ["p"], rot34, params=[neg_param("a12"), neg_param("a34")], note="")

t2("t2_rrp3_0", "rrp3_0",
   omp((1, 4, "a14"), (2, 3, "a23")), J_14_23,
   ["p"], rot23, params=[neg_param("a14"), neg_param("a23")], note="")

t2("t2_r2r2", "r2r2",
   omp((1, 2, "a12"), (3, 4, "a34")), J_12_34,
   [], {}, params=[neg_param("a12"), neg_param("a34")], note="; only D = 0")

t2("t2_rp4_delta_a", "rp4_delta",
   omp((1, 4, "a14"), (2, 3, "a23")), J_41_23,
   ["p"], rot23,
   params=[param("delta", lo="0"), pos_param("a14"), neg_param("a23")], note="")

t2("t2_rp4_delta_b", "rp4_delta",
   omp((1, 4, "a14"), (2, 3, "a23")), J_41_32,
   ["p"], rot23,
   params=[param("delta", lo="0"), pos_param("a14"), pos_param("a23")], note="")

# The (2,3)-block of J needs the factor from [e1,e2]=e3 to be integrable:
# Je1=e4, Je2=e3/2, Je3=-2e2, Je4=-e1 spans the closed frame
# (e4 + i e1, e2 - i e3/2).
J_D42 = mat([(3, 0, "1"), (0, 3, "-1"), (2, 1, "1/2"), (1, 2, "-2")])

t2("t2_d4_2", "d4_2",
   omp((1, 4, "a14"), (2, 3, "a23")), J_D42,
   [], {}, params=[neg_param("a14"), neg_param("a23")], note="; only D = 0")

t2("t2_d4_half", "d4_half",
   omp((1, 2, "a12"), (3, 4, poly("0", mono("-1", "a12")))), J_12_43,
   ["p"], rot12, params=[neg_param("a12")], note="")

t2("t2_dp4_delta_a", "dp4_delta",
   omp((1, 2, "a12"), (3, 4, poly("0", mono("-1", "a12", "delta")))), J_12_43,
   ["p"], rot12,
   params=[param("delta", lo="0"), neg_param("a12")], note="")

t2("t2_dp4_delta_b", "dp4_delta",
   omp((1, 2, "a12"), (3, 4, poly("0", mono("-1", "a12", "delta")))), J_21_34,
   ["p"], rot12,
   params=[param("delta", lo="0"), pos_param("a12")], note="")

data = {
    "source": ("Structure constants transcribed from G. Ovando, 'Four dimensional "
               "symplectic Lie algebras', Beitr. Algebra Geom. 47 (2006), no. 2, "
               "419-434 (Proposition 2.4 and the Section 1 structure equations). "
               "Symplectic forms, complex structures and derivation families are "
               "the published five-dimensional cosymplectic/coKaehler "
               "classification tables over those algebras."),
    "rows": rows,
}

import os
os.makedirs("data", exist_ok=True)
with open("data/ovando4d.json", "w") as f:
    json.dump(data, f, indent=1)
    f.write("\n")
names = [r["name"] for r in rows]
assert len(names) == len(set(names)), "duplicate row names"
print(f"{len(rows)} rows written")
print(" ".join(names))
