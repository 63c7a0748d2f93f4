"""Published 5-fold benchmark results for the three LETOR 2.0 collections.

Static transcriptions of the reference scoreboard: mean and standard
deviation over 5 folds for six well-known rankers plus the per-query
intercept model ("This"), at cutoffs 2, 4, 6, 8, 10 for NDCG and precision,
plus MAP.  These rows are reference data only and are never recomputed.
"""

from __future__ import annotations

__all__ = [
    "DATASETS",
    "METHODS",
    "BASELINE_METHODS",
    "REPORTED_CUTOFFS",
    "TABLES",
    "baseline_cells",
    "reported_this",
]

DATASETS = ("ohsumed", "td2003", "td2004")
METHODS = (
    "This",
    "RankBoost",
    "RankSVM",
    "FRank",
    "ListNet",
    "AdaRank.MAP",
    "AdaRank.NDCG",
)
BASELINE_METHODS = METHODS[1:]
REPORTED_CUTOFFS = (2, 4, 6, 8, 10)

# Each cell is (mean, stdev); cutoff keys follow REPORTED_CUTOFFS.
_OHSUMED_NDCG = {
    "This": {2: (0.491, 0.086), 4: (0.480, 0.058), 6: (0.458, 0.055), 8: (0.448, 0.054), 10: (0.447, 0.047)},
    "RankBoost": {2: (0.483, 0.079), 4: (0.461, 0.063), 6: (0.442, 0.058), 8: (0.436, 0.044), 10: (0.436, 0.042)},
    "RankSVM": {2: (0.476, 0.091), 4: (0.459, 0.059), 6: (0.455, 0.054), 8: (0.445, 0.057), 10: (0.441, 0.055)},
    "FRank": {2: (0.510, 0.074), 4: (0.478, 0.060), 6: (0.457, 0.062), 8: (0.445, 0.054), 10: (0.442, 0.055)},
    "ListNet": {2: (0.497, 0.062), 4: (0.468, 0.065), 6: (0.451, 0.056), 8: (0.451, 0.050), 10: (0.449, 0.040)},
    "AdaRank.MAP": {2: (0.496, 0.100), 4: (0.471, 0.075), 6: (0.448, 0.070), 8: (0.443, 0.058), 10: (0.438, 0.057)},
    "AdaRank.NDCG": {2: (0.474, 0.091), 4: (0.456, 0.057), 6: (0.442, 0.055), 8: (0.441, 0.048), 10: (0.437, 0.046)},
}

_OHSUMED_PRECISION = {
    "This": {2: (0.610, 0.092), 4: (0.598, 0.082), 6: (0.560, 0.090), 8: (0.526, 0.092), 10: (0.511, 0.081)},
    "RankBoost": {2: (0.595, 0.090), 4: (0.562, 0.081), 6: (0.525, 0.093), 8: (0.505, 0.072), 10: (0.495, 0.081)},
    "RankSVM": {2: (0.619, 0.096), 4: (0.579, 0.072), 6: (0.558, 0.077), 8: (0.525, 0.088), 10: (0.507, 0.096)},
    "FRank": {2: (0.619, 0.051), 4: (0.581, 0.079), 6: (0.534, 0.098), 8: (0.501, 0.091), 10: (0.485, 0.097)},
    "ListNet": {2: (0.629, 0.080), 4: (0.577, 0.097), 6: (0.544, 0.098), 8: (0.520, 0.098), 10: (0.510, 0.085)},
    "AdaRank.MAP": {2: (0.605, 0.102), 4: (0.567, 0.087), 6: (0.528, 0.102), 8: (0.502, 0.087), 10: (0.491, 0.091)},
    "AdaRank.NDCG": {2: (0.605, 0.099), 4: (0.562, 0.063), 6: (0.529, 0.073), 8: (0.506, 0.073), 10: (0.491, 0.082)},
}

_TD2003_NDCG = {
    "This": {2: (0.430, 0.179), 4: (0.398, 0.146), 6: (0.375, 0.125), 8: (0.369, 0.113), 10: (0.360, 0.105)},
    "RankBoost": {2: (0.280, 0.097), 4: (0.272, 0.086), 6: (0.280, 0.071), 8: (0.282, 0.074), 10: (0.285, 0.064)},
    "RankSVM": {2: (0.370, 0.130), 4: (0.363, 0.132), 6: (0.341, 0.118), 8: (0.345, 0.117), 10: (0.341, 0.115)},
    "FRank": {2: (0.390, 0.143), 4: (0.342, 0.107), 6: (0.330, 0.087), 8: (0.332, 0.079), 10: (0.336, 0.074)},
    "ListNet": {2: (0.430, 0.160), 4: (0.386, 0.125), 6: (0.386, 0.106), 8: (0.373, 0.104), 10: (0.374, 0.094)},
    "AdaRank.MAP": {2: (0.320, 0.104), 4: (0.268, 0.120), 6: (0.229, 0.104), 8: (0.206, 0.093), 10: (0.194, 0.086)},
    "AdaRank.NDCG": {2: (0.410, 0.207), 4: (0.347, 0.195), 6: (0.309, 0.181), 8: (0.286, 0.171), 10: (0.270, 0.161)},
}

_TD2003_PRECISION = {
    "This": {2: (0.420, 0.192), 4: (0.340, 0.161), 6: (0.283, 0.131), 8: (0.253, 0.115), 10: (0.222, 0.106)},
    "RankBoost": {2: (0.270, 0.104), 4: (0.230, 0.112), 6: (0.210, 0.080), 8: (0.193, 0.071), 10: (0.178, 0.053)},
    "RankSVM": {2: (0.350, 0.132), 4: (0.300, 0.137), 6: (0.243, 0.100), 8: (0.233, 0.091), 10: (0.206, 0.082)},
    "FRank": {2: (0.370, 0.148), 4: (0.260, 0.082), 6: (0.223, 0.043), 8: (0.210, 0.045), 10: (0.186, 0.049)},
    "ListNet": {2: (0.420, 0.164), 4: (0.310, 0.129), 6: (0.283, 0.090), 8: (0.240, 0.075), 10: (0.222, 0.061)},
    "AdaRank.MAP": {2: (0.310, 0.096), 4: (0.230, 0.105), 6: (0.163, 0.081), 8: (0.125, 0.064), 10: (0.102, 0.050)},
    "AdaRank.NDCG": {2: (0.400, 0.203), 4: (0.305, 0.183), 6: (0.237, 0.161), 8: (0.190, 0.140), 10: (0.156, 0.120)},
}

_TD2004_NDCG = {
    "This": {2: (0.473, 0.132), 4: (0.454, 0.075), 6: (0.450, 0.059), 8: (0.459, 0.050), 10: (0.472, 0.043)},
    "RankBoost": {2: (0.473, 0.055), 4: (0.439, 0.057), 6: (0.448, 0.052), 8: (0.461, 0.036), 10: (0.472, 0.034)},
    "RankSVM": {2: (0.433, 0.094), 4: (0.406, 0.086), 6: (0.397, 0.082), 8: (0.410, 0.074), 10: (0.420, 0.067)},
    "FRank": {2: (0.467, 0.113), 4: (0.435, 0.088), 6: (0.445, 0.078), 8: (0.455, 0.055), 10: (0.471, 0.057)},
    "ListNet": {2: (0.427, 0.080), 4: (0.422, 0.049), 6: (0.418, 0.057), 8: (0.449, 0.041), 10: (0.458, 0.036)},
    "AdaRank.MAP": {2: (0.393, 0.060), 4: (0.387, 0.086), 6: (0.399, 0.085), 8: (0.400, 0.086), 10: (0.406, 0.083)},
    "AdaRank.NDCG": {2: (0.360, 0.161), 4: (0.377, 0.123), 6: (0.378, 0.117), 8: (0.380, 0.102), 10: (0.388, 0.093)},
}

_TD2004_PRECISION = {
    "This": {2: (0.447, 0.146), 4: (0.370, 0.095), 6: (0.316, 0.076), 8: (0.288, 0.076), 10: (0.264, 0.062)},
    "RankBoost": {2: (0.447, 0.056), 4: (0.347, 0.083), 6: (0.304, 0.079), 8: (0.277, 0.070), 10: (0.253, 0.067)},
    "RankSVM": {2: (0.407, 0.098), 4: (0.327, 0.089), 6: (0.273, 0.083), 8: (0.247, 0.082), 10: (0.225, 0.072)},
    "FRank": {2: (0.433, 0.115), 4: (0.340, 0.098), 6: (0.311, 0.082), 8: (0.273, 0.071), 10: (0.256, 0.071)},
    "ListNet": {2: (0.407, 0.086), 4: (0.357, 0.087), 6: (0.307, 0.084), 8: (0.287, 0.069), 10: (0.257, 0.059)},
    "AdaRank.MAP": {2: (0.353, 0.045), 4: (0.300, 0.086), 6: (0.282, 0.068), 8: (0.242, 0.063), 10: (0.216, 0.064)},
    "AdaRank.NDCG": {2: (0.320, 0.139), 4: (0.300, 0.082), 6: (0.262, 0.092), 8: (0.232, 0.086), 10: (0.207, 0.082)},
}

_MAP = {
    "ohsumed": {
        "This": (0.445, 0.065),
        "RankBoost": (0.440, 0.062),
        "RankSVM": (0.447, 0.067),
        "FRank": (0.446, 0.062),
        "ListNet": (0.450, 0.063),
        "AdaRank.MAP": (0.442, 0.061),
        "AdaRank.NDCG": (0.442, 0.058),
    },
    "td2003": {
        "This": (0.248, 0.075),
        "RankBoost": (0.212, 0.047),
        "RankSVM": (0.256, 0.083),
        "FRank": (0.245, 0.065),
        "ListNet": (0.273, 0.068),
        "AdaRank.MAP": (0.137, 0.063),
        "AdaRank.NDCG": (0.185, 0.105),
    },
    "td2004": {
        "This": (0.379, 0.051),
        "RankBoost": (0.384, 0.043),
        "RankSVM": (0.350, 0.072),
        "FRank": (0.381, 0.069),
        "ListNet": (0.372, 0.046),
        "AdaRank.MAP": (0.331, 0.089),
        "AdaRank.NDCG": (0.299, 0.088),
    },
}

TABLES = {
    "ohsumed": {"ndcg": _OHSUMED_NDCG, "precision": _OHSUMED_PRECISION, "map": _MAP["ohsumed"]},
    "td2003": {"ndcg": _TD2003_NDCG, "precision": _TD2003_PRECISION, "map": _MAP["td2003"]},
    "td2004": {"ndcg": _TD2004_NDCG, "precision": _TD2004_PRECISION, "map": _MAP["td2004"]},
}


def baseline_cells(dataset: str, metric: str) -> dict:
    """Competitor rows (everything except "This") for one dataset/metric."""
    table = TABLES[dataset.lower()][metric]
    return {method: table[method] for method in BASELINE_METHODS}


def reported_this(dataset: str) -> dict:
    """The reference scoreboard's own "This" rows for one dataset."""
    tables = TABLES[dataset.lower()]
    return {
        "ndcg": tables["ndcg"]["This"],
        "precision": tables["precision"]["This"],
        "map": tables["map"]["This"],
    }
