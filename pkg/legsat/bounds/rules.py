import logging
from typing import List, Optional
from legsat.bounds.graph import (
    BoundGraph, Constraint, Edge, EdgeKind, LinkNode, Quantity, hi, lo)
from legsat.errors import UnsupportedComponents
from legsat.families.families import GeneratorId, GeneratorName, generate
from legsat.front_core.trace import OrientedFront, trace_components
from legsat.invariants.invariants import InvariantReport, compute
from legsat.satellite.satellite import predicted_invariants

logger = logging.getLogger(__name__)

TAU = Quantity.TAU
G4 = Quantity.G4

SPLIT_AXIOM = (
    "axiom: a link smoothly concordant to a split link has the slice genus "
    "of the connected sum of its components")


def _ceil_half(value: int) -> int:
    return -(-value // 2)


def slice_bennequin(
    node: str,
    tb: int,
    rot: int,
    components: int,
    provenance: str = ""
) -> List[Constraint]:
    """
    Lower bounds on tau and g4 from a Legendrian diagram.

    For a knot ``tb + |rot| <= 2 tau - 1 <= 2 g4 - 1``; for a two-component
    link (diagram totals) ``tb + |rot| <= 2 tau - 2 <= 2 g4``.

    Parameters
    ----------
    node : str
        Node the bounds are about.
    tb, rot : int
        Invariants of a diagram of the node.
    components : int
        1 or 2.
    provenance : str, default=""
        Where the diagram comes from.

    Returns
    -------
    facts : list of Constraint
        Lower bounds on tau and on g4.

    Raises
    ------
    UnsupportedComponents
        For three or more components.
    """
    data = f"tb {tb}, rot {rot}" + (f"; {provenance}" if provenance else "")
    total = tb + abs(rot)
    if components == 1:
        bound = _ceil_half(total + 1)
        return [
            Constraint(target=lo(node, TAU), constant=bound,
                       rule="slice-bennequin", provenance=data),
            Constraint(target=lo(node, G4), constant=bound,
                       rule="slice-bennequin", provenance=data),
        ]
    if components == 2:
        return [
            Constraint(target=lo(node, TAU), constant=_ceil_half(total + 2),
                       rule="slice-bennequin-link", provenance=data),
            Constraint(target=lo(node, G4), constant=_ceil_half(total),
                       rule="slice-bennequin-link", provenance=data),
        ]
    raise UnsupportedComponents(
        f"{node} has {components} components; the bound covers knots and "
        f"two-component links")


def slice_bennequin_front(node: str, front: OrientedFront) -> List[Constraint]:
    "``slice_bennequin`` with tb and rot computed from a traced front."
    report = compute(front)
    return slice_bennequin(node, report.tb, report.rot, report.components,
                           provenance="computed from the front")


def assert_upper(node: str, value: int, provenance: str) -> Constraint:
    "g4 of ``node`` is at most ``value``, witnessed by ``provenance``."
    return Constraint(target=hi(node, G4), constant=value,
                      rule="asserted-upper", provenance=provenance)


def assert_tau(node: str, low: Optional[int], high: Optional[int],
               provenance: str) -> List[Constraint]:
    "tau of ``node`` lies in ``[low, high]``."
    facts = []
    if low is not None:
        facts.append(Constraint(target=lo(node, TAU), constant=low,
                                rule="given-tau", provenance=provenance))
    if high is not None:
        facts.append(Constraint(target=hi(node, TAU), constant=high,
                                rule="given-tau", provenance=provenance))
    return facts


def node_axioms(node: LinkNode) -> List[Constraint]:
    """
    ``g4 >= 0``; for knots ``|tau| <= g4``; for two-component links
    ``tau <= g4 + 1``.
    """
    n = node.id
    rules = [Constraint(target=lo(n, G4), constant=0, rule="genus-nonnegative")]
    if node.components == 1:
        rules += [
            Constraint(target=hi(n, TAU), constant=0, terms=((hi(n, G4), 1),),
                       rule="tau-below-genus"),
            Constraint(target=lo(n, TAU), constant=0, terms=((hi(n, G4), -1),),
                       rule="tau-below-genus"),
            Constraint(target=lo(n, G4), constant=0, terms=((lo(n, TAU), 1),),
                       rule="tau-below-genus"),
            Constraint(target=lo(n, G4), constant=0, terms=((hi(n, TAU), -1),),
                       rule="tau-below-genus"),
        ]
    elif node.components == 2:
        rules += [
            Constraint(target=hi(n, TAU), constant=1, terms=((hi(n, G4), 1),),
                       rule="tau-below-genus-link"),
            Constraint(target=lo(n, G4), constant=-1, terms=((lo(n, TAU), 1),),
                       rule="tau-below-genus-link"),
        ]
    return rules


def _genus_step(source: str, target: str, cost: int, rule: str,
                provenance: str) -> List[Constraint]:
    "g4(source) <= g4(target) + cost, read both ways."
    return [
        Constraint(target=hi(source, G4), constant=cost, terms=((hi(target, G4), 1),),
                   rule=rule, provenance=provenance),
        Constraint(target=lo(target, G4), constant=-cost, terms=((lo(source, G4), 1),),
                   rule=rule, provenance=provenance),
    ]


def edge_rules(graph: BoundGraph, edge: Edge) -> List[Constraint]:
    """
    Genus transfer across a cobordism.

    A band changes the Euler characteristic by one: going to the side with
    more components the connected genus stays, going to the side with fewer
    it grows by one.
    """
    a, b = edge.source, edge.target
    if edge.kind is EdgeKind.BAND_MOVE:
        fewer_a = graph.node(a).components < graph.node(b).components
        return (_genus_step(a, b, 1 if fewer_a else 0, "band", edge.provenance) +
                _genus_step(b, a, 0 if fewer_a else 1, "band", edge.provenance))
    rule = "crossing-change" if edge.kind is EdgeKind.CROSSING_CHANGE else "cobordism"
    return (_genus_step(a, b, edge.genus, rule, edge.provenance) +
            _genus_step(b, a, edge.genus, rule, edge.provenance))


def tau_algebra(graph: BoundGraph) -> List[Constraint]:
    """
    Connected sums add tau (read forwards and backwards) and are
    subadditive in g4; reversal changes neither tau nor g4.
    """
    rules = []
    for total in graph.sums:
        s, a, b = total.id, total.first, total.second
        note = f"{s} = {a} # {b}"
        rules += [
            Constraint(target=lo(s, TAU), constant=0,
                       terms=((lo(a, TAU), 1), (lo(b, TAU), 1)),
                       rule="tau-additive", provenance=note),
            Constraint(target=hi(s, TAU), constant=0,
                       terms=((hi(a, TAU), 1), (hi(b, TAU), 1)),
                       rule="tau-additive", provenance=note),
        ]
        for first, second in ((a, b), (b, a)):
            rules += [
                Constraint(target=lo(first, TAU), constant=0,
                           terms=((lo(s, TAU), 1), (hi(second, TAU), -1)),
                           rule="tau-additive", provenance=note),
                Constraint(target=hi(first, TAU), constant=0,
                           terms=((hi(s, TAU), 1), (lo(second, TAU), -1)),
                           rule="tau-additive", provenance=note),
            ]
        rules.append(Constraint(target=hi(s, G4), constant=0,
                                terms=((hi(a, G4), 1), (hi(b, G4), 1)),
                                rule="genus-subadditive", provenance=note))
    for reversal in graph.reversals:
        note = f"{reversal.id} = r{reversal.source}"
        for first, second in ((reversal.id, reversal.source),
                              (reversal.source, reversal.id)):
            for quantity in (TAU, G4):
                rules += [
                    Constraint(target=lo(first, quantity), constant=0,
                               terms=((lo(second, quantity), 1),),
                               rule="reversal", provenance=note),
                    Constraint(target=hi(first, quantity), constant=0,
                               terms=((hi(second, quantity), 1),),
                               rule="reversal", provenance=note),
                ]
    return rules


def split_rules(graph: BoundGraph) -> List[Constraint]:
    "g4 of a hypothetically split link equals g4 of the connected sum."
    rules = []
    for hypothesis in graph.hypotheses:
        link, total = hypothesis.link, hypothesis.connected_sum
        for first, second in ((total, link), (link, total)):
            rules += [
                Constraint(target=lo(first, G4), constant=0,
                           terms=((lo(second, G4), 1),),
                           rule="split-hypothesis", provenance=SPLIT_AXIOM),
                Constraint(target=hi(first, G4), constant=0,
                           terms=((hi(second, G4), 1),),
                           rule="split-hypothesis", provenance=SPLIT_AXIOM),
            ]
    return rules


def compile_rules(graph: BoundGraph) -> List[Constraint]:
    """
    Every constraint the graph implies, facts first, in a fixed order.
    """
    rules = list(graph.facts)
    for node in graph.nodes.values():
        rules += node_axioms(node)
    for edge in graph.edges:
        rules += edge_rules(graph, edge)
    rules += tau_algebra(graph)
    rules += split_rules(graph)
    logger.debug("%d constraints over %d nodes", len(rules), len(graph.nodes))
    return rules



def knot_id() -> str:
    return "K"


def cable_id(i: int) -> str:
    return f"P_{i}(K)"


def clasped_id(i: int) -> str:
    return f"Q_{i}(K)"


def link_id(i: int) -> str:
    return f"L_{i}(K)"


def reoriented_id(i: int) -> str:
    return f"L'_{i}(K)"


def _satellite_node(
    node_id: str,
    pattern: GeneratorId,
    companion: InvariantReport
) -> LinkNode:
    "Node carrying the invariants the composition laws give for pattern(K)."
    report = compute(trace_components(generate(pattern)))
    predicted = predicted_invariants(report, companion)
    return LinkNode(
        id=node_id, components=predicted.components,
        tb=predicted.tb, rot=predicted.rot,
        provenance=[f"satellite of {pattern} over K"])


def theorem_graph(i_max: int) -> BoundGraph:
    """
    Bound graph of the whole slice-genus argument up to index ``i_max``.

    Nodes are the companion K, the cables P_i(K) for ``i <= 2 i_max + 2``,
    the clasped satellites Q_i(K) for ``i <= i_max + 1`` and both
    orientations L_i(K), L'_i(K) of the doubled cables for ``i <= i_max``.
    Their tb and rot come from the composition laws applied to the
    generated patterns and K. Facts: tau(K) = 1, g4(K) <= 1, a
    slice-Bennequin bound on every node and the surface-built upper
    bounds. Edges: crossing changes between consecutive Q_i(K), the bands
    joining Q_{i+1}(K), L_i(K) and Q_i(K), and the band from L'_i(K) to
    P_{2i+2}(K).

    Parameters
    ----------
    i_max : int
        Largest index of L_i(K).

    Returns
    -------
    graph : BoundGraph
    """
    if i_max < 0:
        raise ValueError("i_max must be non-negative")
    companion = compute(trace_components(generate(GeneratorId(name=GeneratorName.K))))
    graph = BoundGraph()
    knot = graph.add_node(LinkNode(
        id=knot_id(), components=1, tb=companion.tb, rot=companion.rot,
        provenance=["Whitehead pattern over the tb-maximising trefoil"]))
    graph.add_facts(assert_tau(knot.id, 1, 1, "tau of K"))
    graph.add_facts([assert_upper(knot.id, 1, "K has Seifert genus one")])

    for i in range(1, 2 * i_max + 3):
        graph.add_node(_satellite_node(
            cable_id(i), GeneratorId(name=GeneratorName.P, index=i), companion))
        graph.add_facts([assert_upper(
            cable_id(i), i, f"{i} parallel copies of a genus-one Seifert surface of K")])
    for i in range(1, i_max + 2):
        graph.add_node(_satellite_node(
            clasped_id(i), GeneratorId(name=GeneratorName.Q, index=i), companion))
    graph.add_facts([assert_upper(
        clasped_id(1), 1, "clasped Whitehead double of K, Seifert genus one")])
    for i in range(i_max + 1):
        graph.add_node(_satellite_node(
            link_id(i), GeneratorId(name=GeneratorName.L, index=i), companion))
        graph.add_node(_satellite_node(
            reoriented_id(i), GeneratorId(name=GeneratorName.LPRIME, index=i), companion))
    graph.add_facts([assert_upper(
        link_id(0), 0, "the two components cobound an annulus")])

    for node in list(graph.nodes.values()):
        graph.add_facts(slice_bennequin(node.id, node.tb, node.rot, node.components))

    for i in range(1, i_max + 1):
        graph.crossing_change(
            clasped_id(i + 1), clasped_id(i), "one crossing change in the clasp region")
    for i in range(i_max + 1):
        graph.band(clasped_id(i + 1), link_id(i), "band through the clasp")
        if i >= 1:
            graph.band(link_id(i), clasped_id(i), "band joining the two cables")
        graph.band(reoriented_id(i), cable_id(2 * i + 2),
                   "band joining the parallel cables into one")
    logger.info("theorem graph up to %d: %d nodes, %d edges, %d facts",
                i_max, len(graph.nodes), len(graph.edges), len(graph.facts))
    return graph
