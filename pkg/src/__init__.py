# hypercurves: exact hyperelliptic curve families with many rational points
