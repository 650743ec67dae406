"""codefarm: evolve programs against per-generation randomized target datasets.

The farm loop breeds a population of byte-coded programs whose fitness is how
well they match a target dataset that is re-randomized every generation, under
weak selection. Its products are the seed list (each generation's fittest
program) and the elite ledger (phenotype-distinct, non-trivial champions).
"""

__version__ = "0.1.0"
