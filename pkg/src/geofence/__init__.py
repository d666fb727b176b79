"""Private location alerts on encrypted grid cells.

Layers, bottom up:

* bilinear  — composite-order pairing group (fast, insecure reference
  backend) with fixed-base precomputation and operation counters;
* hve       — hidden-vector encryption: keys, ciphertexts, tokens, query;
* encoding  — grid addressing and the baseline / hier / gray index codes;
* minimize  — exact cover of a cell set by few wildcard patterns;
* expansion — budgeted zone enlargement that trades a little area for
  fewer pairings;
* engine    — token stores and (parallel) ciphertext matching;
* bench     — data generators and the benchmark protocol;
* cli       — the `geofence` command.
"""

__version__ = "0.1.0"
