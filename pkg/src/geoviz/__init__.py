"""geoviz: a spatio-temporal knowledge-graph engine and query service.

Datasets of time- and location-annotated entities with labeled relations
are queryable through three complementary views: a hierarchical concept
tree (timeline/decade/year and world/continent/country), a relation net
with time filtering, k-hop zoom-in, and similarity-based link discovery,
and a map view with marker clustering and timeline histograms.
"""

__version__ = "0.1.0"
