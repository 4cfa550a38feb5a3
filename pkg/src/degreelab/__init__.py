"""degreelab: exact small-scale complexity measures of Boolean functions.

Computes bounded approximate degree via LP, exact/approximate gamma2 norms
via SDP, builds the group-testing dual adversary witness family, and checks
Lagrange-interpolation coefficient bounds.
"""

__version__ = "0.1.0"
