import logging
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple
from pydantic import BaseModel, NonNegativeInt, PositiveInt, constr
from legsat.bounds.interval import Interval
from legsat.errors import ScenarioError
from legsat.front_core.trace import OrientedFront

logger = logging.getLogger(__name__)

NodeId = constr(regex=r"^[A-Za-z0-9_(),'#.+-]+$")


class Quantity(str, Enum):
    TAU = "tau"
    G4 = "g4"


class Side(str, Enum):
    LO = "lo"
    HI = "hi"


class BoundRef(NamedTuple):
    "One end of one interval of one node."
    node: str
    quantity: Quantity
    side: Side

    def __str__(self) -> str:
        return f"{self.quantity.value}({self.node}).{self.side.value}"


def lo(node: str, quantity: Quantity) -> BoundRef:
    return BoundRef(node, quantity, Side.LO)


def hi(node: str, quantity: Quantity) -> BoundRef:
    return BoundRef(node, quantity, Side.HI)


class Constraint(BaseModel):
    """
    Linear bound ``target >= constant + sum(coef * term)`` for a lower end,
    ``target <= constant + sum(coef * term)`` for an upper end.

    A constraint without terms is a fact.

    Parameters
    ----------
    target : BoundRef
        The end being bounded.
    constant : int
        Constant part of the right-hand side.
    terms : tuple of (BoundRef, int), default=()
        Ends the right-hand side depends on, with coefficients.
    rule : str
        Name of the rule producing the constraint.
    provenance : str, default=""
        Where the rule comes from (a construction, an axiom).
    """
    target: BoundRef
    constant: int
    terms: Tuple[Tuple[BoundRef, int], ...] = ()
    rule: str
    provenance: str = ""

    class Config:
        allow_mutation = False

    def __str__(self) -> str:
        relation = ">=" if self.target.side is Side.LO else "<="
        rhs = " ".join(f"{coef:+d}*{term}" for term, coef in self.terms)
        return f"{self.target} {relation} {self.constant} {rhs}".rstrip()


class LinkNode(BaseModel):
    """
    A knot or link of the bound graph.

    Parameters
    ----------
    id : str
        Identifier, e.g. ``"Q_3(K)"``.
    components : int
        Number of components.
    front : OrientedFront, default=None
        Diagram, when one is known.
    tb : int, default=None
        Thurston-Bennequin number (of the diagram, for links).
    rot : int, default=None
        Rotation number (of the diagram, for links).
    tau : Interval, default=Interval()
        Known range of tau.
    g4 : Interval, default=Interval()
        Known range of the smooth slice genus.
    provenance : list of str, default=[]
        Notes on where the node comes from.
    """
    id: NodeId
    components: PositiveInt
    front: Optional[OrientedFront] = None
    tb: Optional[int] = None
    rot: Optional[int] = None
    tau: Interval = Interval()
    g4: Interval = Interval()
    provenance: List[str] = []

    class Config:
        arbitrary_types_allowed = True

    @property
    def is_knot(self) -> bool:
        return self.components == 1


class EdgeKind(str, Enum):
    CROSSING_CHANGE = "crossing-change"
    BAND_MOVE = "band"
    ASSERTED_COBORDISM = "cobordism"


class Edge(BaseModel):
    """
    An elementary cobordism between two nodes.

    Parameters
    ----------
    kind : EdgeKind
        Crossing changes cost genus 1 both ways; a band move costs genus 1
        towards the side with fewer components and 0 towards the other;
        an asserted cobordism costs ``genus`` both ways.
    source : str
        First endpoint.
    target : str
        Second endpoint.
    genus : int, default=1
        Genus of an asserted cobordism.
    provenance : str, default=""
        Where the cobordism comes from.
    """
    kind: EdgeKind
    source: NodeId
    target: NodeId
    genus: NonNegativeInt = 1
    provenance: str = ""

    class Config:
        allow_mutation = False


class ConnectedSum(BaseModel):
    id: NodeId
    first: NodeId
    second: NodeId


class Reversal(BaseModel):
    id: NodeId
    source: NodeId


class SplitHypothesis(BaseModel):
    """
    Assumption that ``link`` is smoothly concordant to the split union of
    the summands of ``connected_sum``.
    """
    link: NodeId
    connected_sum: NodeId


class BoundGraph(BaseModel):
    """
    Nodes with tau / g4 intervals, cobordism edges and facts.

    Parameters
    ----------
    nodes : dict
        ``{id: LinkNode}`` in insertion order.
    edges : list of Edge
    facts : list of Constraint
        Constraints without terms (lower bounds, asserted uppers, given tau
        values).
    sums : list of ConnectedSum
    reversals : list of Reversal
    hypotheses : list of SplitHypothesis
    """
    nodes: Dict[str, LinkNode] = {}
    edges: List[Edge] = []
    facts: List[Constraint] = []
    sums: List[ConnectedSum] = []
    reversals: List[Reversal] = []
    hypotheses: List[SplitHypothesis] = []

    def node(self, node_id: str) -> LinkNode:
        if node_id not in self.nodes:
            raise ScenarioError(f"unknown node {node_id!r}")
        return self.nodes[node_id]

    def add_node(self, node: LinkNode) -> LinkNode:
        if node.id in self.nodes:
            raise ScenarioError(f"node {node.id!r} declared twice")
        self.nodes[node.id] = node
        return node

    def add_facts(self, facts: List[Constraint]) -> None:
        for fact in facts:
            self.node(fact.target.node)
            if fact.terms:
                raise ScenarioError(f"{fact} depends on other bounds")
        self.facts.extend(facts)

    def add_edge(self, edge: Edge) -> Edge:
        source = self.node(edge.source)
        target = self.node(edge.target)
        if edge.kind is EdgeKind.BAND_MOVE and \
                abs(source.components - target.components) != 1:
            raise ScenarioError(
                f"a band between {source.id} and {target.id} must change the "
                f"component count by one")
        self.edges.append(edge)
        return edge

    def band(self, source: str, target: str, provenance: str = "") -> Edge:
        return self.add_edge(Edge(
            kind=EdgeKind.BAND_MOVE, source=source, target=target,
            genus=0, provenance=provenance))

    def crossing_change(self, source: str, target: str, provenance: str = "") -> Edge:
        return self.add_edge(Edge(
            kind=EdgeKind.CROSSING_CHANGE, source=source, target=target,
            genus=1, provenance=provenance))

    def cobordism(self, source: str, target: str, genus: int, provenance: str) -> Edge:
        return self.add_edge(Edge(
            kind=EdgeKind.ASSERTED_COBORDISM, source=source, target=target,
            genus=genus, provenance=provenance))

    def connected_sum(self, node_id: str, first: str, second: str) -> LinkNode:
        "Declare ``node_id`` as the connected sum of two knots."
        for summand in (first, second):
            if not self.node(summand).is_knot:
                raise ScenarioError(f"{summand} is not a knot")
        node = self.nodes.get(node_id) or self.add_node(
            LinkNode(id=node_id, components=1,
                     provenance=[f"{first} # {second}"]))
        self.sums.append(ConnectedSum(id=node.id, first=first, second=second))
        return node

    def reverse(self, node_id: str, source: str) -> LinkNode:
        "Declare ``node_id`` as the reverse of the knot ``source``."
        if not self.node(source).is_knot:
            raise ScenarioError(f"{source} is not a knot")
        node = self.nodes.get(node_id) or self.add_node(
            LinkNode(id=node_id, components=1, provenance=[f"reverse of {source}"]))
        self.reversals.append(Reversal(id=node.id, source=source))
        return node

    def hypothesize_split(self, link: str, connected_sum: str) -> None:
        self.node(link)
        self.node(connected_sum)
        self.hypotheses.append(
            SplitHypothesis(link=link, connected_sum=connected_sum))
