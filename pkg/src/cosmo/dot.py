"""Graphviz export of a model's topology.

One node per constructor (shaded by kind), per predicate, per role, per
function and per join; links between constructors use one edge style per
link kind. Node order follows declaration order, so output is stable.
"""

from __future__ import annotations

from .model import Constructor, ConstructorKind, JoinKind, LinkKind, Model, RoleKind

_LINK_STYLE = {
    LinkKind.SUB_CONSTRUCTOR_OF: 'style=solid, arrowhead=empty, label="SubConstructorOf"',
    LinkKind.INSTANCE_OF: 'style=dashed, arrowhead=empty, label="InstanceOf"',
    LinkKind.PART_OF: 'style=dotted, arrowhead=odiamond, label="PartOf"',
}
_FILL = {ConstructorKind.TYPE: "gray90", ConstructorKind.INSTANCE: "gray70"}


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _constructor(c: Constructor, out: list[str]):
    cid = c.name
    out.append(f"  {_q(cid)} [shape=box, style=filled, fillcolor={_FILL[c.kind]}, "
               f"label={_q(c.name + chr(10) + c.kind.value)}];")
    for k, b in enumerate(c.blocks, start=1):
        base = f"{cid}/b{k}"
        pnode = f"{base}/{b.predicate.pitem}"
        out.append(f"  {_q(pnode)} [shape=box, style=rounded, label={_q(str(b.predicate.pitem))}];")
        out.append(f"  {_q(cid)} -> {_q(pnode)} [arrowhead=none, style=bold];")
        role_nodes = {}
        for r in b.roles:
            rnode = f"{base}/{r.var}"
            role_nodes[r.var] = rnode
            label = f"{r.var}" + (f"[{r.name}]" if r.name else "") + f": {r.filler}"
            style = "solid" if r.kind is RoleKind.OBJECT else "dashed"
            extra = ", color=purple, penwidth=2" if r.var in b.mandatories else ""
            out.append(f"  {_q(rnode)} [shape=ellipse, style={style}{extra}, label={_q(label)}];")
            pos = "1" if r.var == b.predicate.var1 else "2"
            out.append(f"  {_q(pnode)} -> {_q(rnode)} [label={_q(pos)}];")
        for n, f in enumerate(b.functions, start=1):
            fnode = f"{base}/f{n}/{f.zitem}"
            out.append(f"  {_q(fnode)} [shape=hexagon, label={_q(str(f.zitem))}];")
            for a in f.args:
                targets = [role_nodes[r.var] for r in b.roles if r.filler == a] or [pnode]
                for t in targets:
                    out.append(f"  {_q(fnode)} -> {_q(t)} [style=dotted];")
        declared = {pnode}  # join endpoints shared by several joins get one node
        for n, j in enumerate(b.joins, start=1):
            jnode = f"{base}/join{n}"
            out.append(f"  {_q(jnode)} [shape=circle, label=\"Join\"];")
            for it in (j.left, j.right):
                if j.kind is JoinKind.PP:
                    inode, shape = f"{base}/{it}", "shape=box, style=rounded"
                else:
                    inode, shape = f"{base}/item/{it}", "shape=ellipse"
                if inode not in declared:
                    declared.add(inode)
                    out.append(f"  {_q(inode)} [{shape}, label={_q(str(it))}];")
                out.append(f"  {_q(jnode)} -> {_q(inode)} [arrowhead=none];")
        for n, inst in enumerate(b.instantiations, start=1):
            inode = f"{base}/inst{n}/{inst.instance}"
            out.append(f"  {_q(inode)} [shape=box, style=filled, fillcolor=white, label={_q(str(inst.instance))}];")
            for r in b.roles:
                if r.filler == inst.type_item:
                    out.append(f"  {_q(role_nodes[r.var])} -> {_q(inode)} [label=\"=\"];")


def export_dot(model: Model) -> str:
    body: list[str] = []
    for d in model.declarations:
        if isinstance(d, Constructor):
            _constructor(d, body)
    for ln in model.links:
        body.append(f"  {_q(ln.source)} -> {_q(ln.target)} [{_LINK_STYLE[ln.kind]}];")
    if body:
        body = ["  rankdir=LR;", '  node [fontname="Helvetica"];'] + body
    return "digraph cosmo {\n" + "".join(line + "\n" for line in body) + "}\n"
