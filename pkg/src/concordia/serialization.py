"""JSON and DOT serialisation for every artifact type.

All JSON is emitted with sorted keys and 2-space indent so reruns are
byte-identical.  Category JSON lists each object's strict superiors under
"leq"; the reflexive pairs are implied.
"""
from __future__ import annotations

import json

from .categories import SubobjectCategory, from_parts
from .cones import Cone, ConeSemigroup
from .semigroups import (
    EqRelation,
    FiniteSemigroup,
    SemigroupError,
    biorder,
    green_classes,
    identity_of,
    idempotents,
    is_abundant,
    is_concordant,
    is_weakly_reductive,
    regular_elements,
    starred_relation,
    validate_table,
    LEFT,
    RIGHT,
)


class ParseError(SemigroupError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def semigroup_to_json(s: FiniteSemigroup) -> dict:
    out = {"order": s.order, "table": [list(row) for row in s.table]}
    if s.names:
        out["names"] = list(s.names)
    one = identity_of(s)
    if one is not None:
        out["one"] = one
    return out


def semigroup_from_json(data) -> FiniteSemigroup:
    if not isinstance(data, dict) or "table" not in data:
        raise ParseError("semigroup JSON needs a 'table' field")
    table = data["table"]
    if "order" in data and data["order"] != len(table):
        raise ParseError("declared order does not match the table size")
    return validate_table(table, names=data.get("names"), one=data.get("one"))


def category_to_json(c: SubobjectCategory) -> dict:
    objects = [{"id": a,
                "leq": sorted(b for b in c.objects if b != a and (a, b) in c.leq)}
               for a in c.objects]
    morphisms = [{"id": m, "dom": c.dom[m], "cod": c.cod[m],
                  "inclusion": c.is_inclusion(m), "label": c.label(m)}
                 for m in c.morphisms]
    compose = sorted([m1, m2, m3] for (m1, m2), m3 in c.compose_table.items())
    return {"objects": objects, "morphisms": morphisms, "compose": compose}


def category_from_json(data) -> SubobjectCategory:
    try:
        n = len(data["objects"])
        leq = [(o["id"], b) for o in data["objects"] for b in o.get("leq", ())]
        morphisms = [(m["dom"], m["cod"], m.get("inclusion", False))
                     for m in sorted(data["morphisms"], key=lambda m: m["id"])]
        compose = [tuple(t) for t in data["compose"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad category JSON: {exc}") from exc
    return from_parts(n, leq, morphisms, compose)


def cone_to_json(cone: Cone) -> dict:
    return {"vertex": cone.vertex,
            "components": {str(a): m for a, m in enumerate(cone.components)}}


def cone_semigroup_to_json(cs: ConeSemigroup) -> dict:
    return {"semigroup": semigroup_to_json(cs.table),
            "provenance": cs.provenance,
            "cones": [cone_to_json(cone) for cone in cs.cones]}


def eq_relation_to_json(rel: EqRelation) -> list:
    return [sorted(cls) for cls in rel.classes()]


def analysis_to_json(s: FiniteSemigroup) -> dict:
    g = green_classes(s)
    lstar = starred_relation(s, LEFT)
    rstar = starred_relation(s, RIGHT)
    ab = is_abundant(s)
    rep = is_concordant(s)
    bo = biorder(s)
    out = {
        "order": s.order,
        "names": list(s.names) if s.names else None,
        "idempotents": list(idempotents(s)),
        "green": {
            "L": eq_relation_to_json(g.l),
            "R": eq_relation_to_json(g.r),
            "H": eq_relation_to_json(g.h),
            "D": eq_relation_to_json(g.d),
        },
        "starred": {
            "L_star": eq_relation_to_json(lstar),
            "R_star": eq_relation_to_json(rstar),
        },
        "abundant": ab.abundant,
        "abundance_witnesses": {
            "dagger": list(ab.dagger),
            "star": list(ab.star),
            "failing": list(ab.failing()),
        },
        "idempotent_connected": rep.idempotent_connected,
        "idempotents_generate_regular": rep.idempotents_regular,
        "non_regular_witness": rep.esub.non_regular_witness,
        "concordant": rep.concordant,
        "regular": len(regular_elements(s)) == s.order,
        "weakly_reductive": is_weakly_reductive(s),
        "biorder": {
            "omega_l": sorted(map(list, bo.omega_l)),
            "omega_r": sorted(map(list, bo.omega_r)),
            "sandwich": {f"{e},{f}": list(hs) for (e, f), hs in sorted(bo.sandwich.items())},
            "regular": bo.regular,
        },
    }
    if rep.ic is not None:
        out["ic_bijections"] = [list(map(list, alpha)) for alpha in rep.ic.alpha]
        out["ic_non_forced"] = list(rep.ic.non_forced)
    return out


def analysis_to_text(s: FiniteSemigroup) -> str:
    data = analysis_to_json(s)
    lines = [f"order {data['order']}, idempotents {data['idempotents']}"]
    for rel in ("L", "R", "H", "D"):
        lines.append(f"  {rel}-classes: {data['green'][rel]}")
    lines.append(f"  L*-classes: {data['starred']['L_star']}")
    lines.append(f"  R*-classes: {data['starred']['R_star']}")
    lines.append(f"  abundant: {data['abundant']}"
                 + (f" (failing: {data['abundance_witnesses']['failing']})"
                    if not data["abundant"] else ""))
    lines.append(f"  idempotent-connected: {data['idempotent_connected']}")
    lines.append(f"  idempotents generate regular subsemigroup: "
                 f"{data['idempotents_generate_regular']}"
                 + (f" (witness: {data['non_regular_witness']})"
                    if data["non_regular_witness"] is not None else ""))
    lines.append(f"  concordant: {data['concordant']}")
    lines.append(f"  regular: {data['regular']}")
    lines.append(f"  weakly reductive: {data['weakly_reductive']}")
    lines.append(f"  biordered set regular: {data['biorder']['regular']}")
    return "\n".join(lines) + "\n"


def category_to_dot(c: SubobjectCategory) -> str:
    """One node per object, one edge per morphism; inclusions bold."""
    lines = ["digraph category {", "  rankdir=BT;"]
    for a in c.objects:
        lines.append(f'  o{a} [label="{c.object_label(a)}"];')
    for m in c.morphisms:
        style = ' [style=bold color=blue]' if c.is_inclusion(m) else \
            f' [label="{c.label(m)}"]'
        lines.append(f"  o{c.dom[m]} -> o{c.cod[m]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def eggbox_to_json(s: FiniteSemigroup) -> dict:
    g = green_classes(s)
    lstar = starred_relation(s, LEFT)
    rstar = starred_relation(s, RIGHT)
    boxes = []
    for dcls in g.d.classes():
        rows = sorted({g.r.partition[x] for x in dcls})
        cols = sorted({g.l.partition[x] for x in dcls})
        grid = [[sorted(x for x in dcls
                        if g.r.partition[x] == r and g.l.partition[x] == co)
                 for co in cols] for r in rows]
        boxes.append({
            "elements": sorted(dcls),
            "r_classes": rows,
            "l_classes": cols,
            "grid": grid,
        })
    return {
        "order": s.order,
        "d_classes": boxes,
        "starred_overlay": {
            "L_star": eq_relation_to_json(lstar),
            "R_star": eq_relation_to_json(rstar),
        },
    }


def eggbox_to_dot(s: FiniteSemigroup) -> str:
    """The D-class grid: one HTML table node per D-class, R-classes as rows
    and L-classes as columns; each cell also carries the element's L*/R*
    class representatives as a starred overlay."""
    data = eggbox_to_json(s)
    lstar = starred_relation(s, LEFT)
    rstar = starred_relation(s, RIGHT)
    lines = ["digraph eggbox {", "  node [shape=plaintext];"]
    for i, box in enumerate(data["d_classes"]):
        rows_html = []
        for row in box["grid"]:
            cells = []
            for cell in row:
                entries = ["%s<BR/><FONT POINT-SIZE=\"8\">L*%d R*%d</FONT>" % (
                    s.name(x), lstar.partition[x], rstar.partition[x])
                    for x in cell]
                cells.append("<TD>" + ("<BR/>".join(entries) or "&nbsp;") + "</TD>")
            rows_html.append("<TR>" + "".join(cells) + "</TR>")
        label = ("<<TABLE BORDER=\"1\" CELLBORDER=\"1\" CELLSPACING=\"0\">"
                 + "".join(rows_html) + "</TABLE>>")
        lines.append(f"  d{i} [label={label}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def omega_to_json(omega) -> dict:
    return {
        "left_category": category_to_json(omega.C),
        "right_category": category_to_json(omega.D),
        "gamma": {"objects": {str(k): v for k, v in sorted(omega.gamma.objects.items())},
                  "morphisms": {str(k): v for k, v in sorted(omega.gamma.morphisms.items())}},
        "delta": {"objects": {str(k): v for k, v in sorted(omega.delta.objects.items())},
                  "morphisms": {str(k): v for k, v in sorted(omega.delta.morphisms.items())}},
        "e_omega": [list(cd) for cd in omega.e_omega],
        "gamma_cones": {f"{c},{d}": cone_to_json(omega.cs_c.cones[i])
                        for (c, d), i in sorted(omega.gamma_of.items())},
        "delta_cones": {f"{c},{d}": cone_to_json(omega.cs_d.cones[i])
                        for (c, d), i in sorted(omega.delta_of.items())},
    }


def somega_to_json(somega) -> dict:
    return {
        "semigroup": semigroup_to_json(somega.semigroup),
        "linked_pairs": [
            {"id": i,
             "gamma": cone_to_json(somega.omega.cs_c.cones[g]),
             "delta": cone_to_json(somega.omega.cs_d.cones[d]),
             "anchor": list(somega.anchors[i])}
            for i, (g, d) in enumerate(somega.pairs)],
    }


def phi_to_json(cert) -> dict:
    return {
        "isomorphism": cert.ok,
        "mapping": list(cert.mapping),
        "homomorphism": cert.homomorphism,
        "injective": cert.injective,
        "surjective": cert.surjective,
        "weakly_reductive": cert.weakly_reductive,
    }


def icc_to_json(icc) -> dict:
    return {
        "objects": [list(cd) for cd in icc.objects],
        "morphisms": [
            {"id": m, "dom": i, "cod": j, "bimorphism": u,
             "label": icc.label(m)}
            for m, (i, j, u) in enumerate(icc.morphisms)],
        "order": sorted(map(list, icc.order)),
        "distinguished": {f"{i},{j}": m
                          for (i, j), m in sorted(icc.distinguished.items())},
        "restrictions": {f"{e},{m}": m1
                         for (e, m), m1 in sorted(icc.restriction.items())},
        "corestrictions": {f"{m},{f}": m1
                           for (m, f), m1 in sorted(icc.corestriction.items())},
    }


def icc_to_dot(icc) -> str:
    lines = ["digraph icc {", "  rankdir=BT;"]
    for i, cd in enumerate(icc.objects):
        lines.append(f'  p{i} [label="{icc.omega.pair_label(cd)}"];')
    for m, (i, j, u) in enumerate(icc.morphisms):
        lines.append(f'  p{i} -> p{j} [label="{icc.omega.C.label(u)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
