"""Graphviz DOT text for bound quivers and windows."""

from .quiver import vertex_label

_STYLE = {"alpha": "solid", "beta": "dashed", "gamma": "dotted"}


def _quote(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(quiver, tags=None, ranks=None, name="Q"):
    """DOT source with one node per vertex and one edge per arrow.

    ``tags`` maps arrow ids to alpha/beta/gamma (edge style); ``ranks`` maps
    vertices to a floor or layer, and vertices sharing a value are drawn on
    one rank. Output depends only on the declaration order of the quiver.
    """
    tags = tags or {}
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for v in quiver.vertices:
        lines.append(f"  {_quote(vertex_label(v))};")
    for a in quiver.arrows:
        style = _STYLE.get(tags.get(a.id, "alpha"), "solid")
        lines.append(f"  {_quote(vertex_label(a.source))} -> {_quote(vertex_label(a.target))} [label={_quote(a.id)}, style={style}];")
    if ranks:
        groups = {}
        for v in quiver.vertices:
            if v in ranks:
                groups.setdefault(ranks[v], []).append(v)
        for key in sorted(groups):
            members = " ".join(_quote(vertex_label(v)) + ";" for v in groups[key])
            lines.append(f"  {{ rank=same; {members} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def window_dot(window, name="window"):
    return export_dot(window.quiver, window.tags, window.layer, name)


def multilayer_dot(mlq, name="multilayer"):
    return export_dot(mlq.quiver, mlq.tags, mlq.floor, name)
