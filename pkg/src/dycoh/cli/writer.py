"""Serialize presentations back into the text format read by :mod:`.parser`."""

from __future__ import annotations

import itertools
import re

_BAD = re.compile(r"[^A-Za-z0-9_'^]")


def clean_name(name):
    s = _BAD.sub("_", str(name))
    return s or "_"


def _combo(field, coords, names):
    terms = [f"{field.fmt(v)} {names[i]}" for i, v in enumerate(coords) if v]
    return " + ".join(terms) if terms else "0"


def _hom_names(c):
    """Basis names for every nonzero hom space, generated where the presentation has none."""
    out, used = {}, set(clean_name(o) for o in c.objects)
    for x, y in itertools.product(range(c.n_objects), repeat=2):
        d = c.dim(x, y)
        if not d:
            continue
        given = c.hom_names.get((x, y))
        names = []
        for i in range(d):
            nm = clean_name(given[i]) if given else f"m_{clean_name(c.objects[x])}_{clean_name(c.objects[y])}_{i}"
            while nm in used:
                nm += "'"
            used.add(nm)
            names.append(nm)
        out[(x, y)] = names
    return out


def write_category(c, name=None):
    field = c.field
    obj = [clean_name(o) for o in c.objects]
    hn = _hom_names(c)
    n = c.n_objects
    lines = [f"category {clean_name(name or c.name)}", "  objects " + " ".join(obj)]
    for (x, y), names in hn.items():
        lines.append(f"  hom {obj[x]} {obj[y]} : " + " ".join(names))
    for x in range(n):
        if c.dim(x, x):
            lines.append(f"  identity {obj[x]} = {_combo(field, c.identity(x), hn[(x, x)])}")
    for x, y in itertools.product(range(n), repeat=2):
        lines.append(f"  tensor {obj[x]} {obj[y]} = {obj[c.tensor(x, y)]}")
    for x, y, z in itertools.product(range(n), repeat=3):
        if not (c.dim(x, y) and c.dim(y, z)):
            continue
        for i, j in itertools.product(range(c.dim(x, y)), range(c.dim(y, z))):
            v = c.compose_mor(x, y, z, c.basis(x, y, i), c.basis(y, z, j))
            if any(v):
                lines.append(f"  compose {hn[(y, z)][j]} . {hn[(x, y)][i]} = {_combo(field, v, hn[(x, z)])}")
    for x, x2, y, y2 in itertools.product(range(n), repeat=4):
        if not (c.dim(x, x2) and c.dim(y, y2)):
            continue
        for i, j in itertools.product(range(c.dim(x, x2)), range(c.dim(y, y2))):
            v = c.tensor_morphisms(x, x2, y, y2, c.basis(x, x2, i), c.basis(y, y2, j))
            if any(v):
                tgt = hn[(c.tensor(x, y), c.tensor(x2, y2))]
                lines.append(f"  tensor {hn[(x, x2)][i]} {hn[(y, y2)][j]} = {_combo(field, v, tgt)}")
    if c.associator is not None:
        for x, y, z in itertools.product(range(n), repeat=3):
            v = c.associator[(x, y, z)]
            if any(v):
                key = (c.tensor(x, c.tensor(y, z)), c.tensor(c.tensor(x, y), z))
                lines.append(f"  assoc {obj[x]} {obj[y]} {obj[z]} = {_combo(field, v, hn[key])}")
    if c.unit is not None:
        lines.append(f"  unit {obj[c.unit]}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_algebra(a, name=None):
    field = a.field
    names = [clean_name(s) for s in a.names]
    lines = [f"algebra {clean_name(name or a.name)}", "  basis " + " ".join(names)]
    for i, j in itertools.product(range(a.dim), repeat=2):
        v = a.mul[i][j]
        if any(v):
            lines.append(f"  mul {names[i]} {names[j]} = {_combo(field, v, names)}")
    if a.unit_coords is not None:
        lines.append(f"  unit = {_combo(field, a.unit_coords, names)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_bimodule(m, algebra_name=None, name=None):
    field = m.field
    a = m.algebra
    an = [clean_name(s) for s in a.names]
    mn = [clean_name(s) for s in m.names]
    lines = [f"bimodule {clean_name(name or m.name)} over {clean_name(algebra_name or a.name)}",
             "  basis " + " ".join(mn)]
    for i, j in itertools.product(range(a.dim), range(m.dim)):
        v = m.left[i][j]
        if any(v):
            lines.append(f"  left {an[i]} {mn[j]} = {_combo(field, v, mn)}")
    for j, i in itertools.product(range(m.dim), range(a.dim)):
        v = m.right[j][i]
        if any(v):
            lines.append(f"  right {mn[j]} {an[i]} = {_combo(field, v, mn)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_cochain(f, name="f", module_name=None):
    m = f.module
    field = m.field
    an = [clean_name(s) for s in m.algebra.names]
    mn = [clean_name(s) for s in m.names]
    lines = [f"cochain {clean_name(name)} in {clean_name(module_name or m.name)} degree {f.degree}"]
    for key in sorted(f.values):
        v = f.values[key]
        if any(v):
            args = "".join(f" {an[i]}" for i in key)
            lines.append(f"  value{args} = {_combo(field, v, mn)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_file(field, blocks):
    head = "field Q" if not field.is_prime_field else f"field F {field.modulus}"
    return head + "\n\n" + "\n".join(blocks)
