"""Knowledge hub for interconnected communities of practice.

A shared hierarchical classification of practice subjects whose leaves are
communities, member profiles that declare community memberships, resources
indexed under subjects with downward inheritance, cross-community spreading,
contextualized search over resources and profiles, and usage-driven
evolution of the classification. Ships as an engine library plus an HTTP
service and an admin CLI.
"""

from .engine import ConsultView, Engine, EngineConfig
from .errors import CophubError
from .profiles import MemberProfile, ProfileRegistry, SCOPE_ALL, SCOPE_SECONDARY, SCOPE_WORKING
from .resources import Reply, Resource, ResourceCatalog, SubjectAssociation
from .search import CartItem, ProfileHit, ResourceHit, SearchQuery
from .seed_io import export_seed, load_seed, parse_seed, read_seed_file, tutoring_seed_doc
from .store import Store
from .taxonomy import PrunePolicy, Subject, Taxonomy, UsageEvent

__version__ = "0.1.0"

__all__ = [
    "CartItem",
    "ConsultView",
    "CophubError",
    "Engine",
    "EngineConfig",
    "MemberProfile",
    "ProfileHit",
    "ProfileRegistry",
    "PrunePolicy",
    "Reply",
    "Resource",
    "ResourceCatalog",
    "ResourceHit",
    "SCOPE_ALL",
    "SCOPE_SECONDARY",
    "SCOPE_WORKING",
    "SearchQuery",
    "Store",
    "Subject",
    "SubjectAssociation",
    "Taxonomy",
    "UsageEvent",
    "export_seed",
    "load_seed",
    "parse_seed",
    "read_seed_file",
    "tutoring_seed_doc",
]
