from dataclasses import dataclass


@dataclass(frozen=True)
class EditCounts:
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0

    @property
    def total(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    def __add__(self, other: "EditCounts") -> "EditCounts":
        return EditCounts(
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
        )


def edit_distance(reference, hypothesis) -> EditCounts:
    """Unit-cost Levenshtein alignment of reference against hypothesis.

    Backtrace prefers a substitution (or match), then a deletion, then an insertion.
    """
    n, m = len(reference), len(hypothesis)
    cost = [list(range(m + 1))]
    for i in range(1, n + 1):
        above = cost[-1]
        row = [i] + [0] * m
        ref_token = reference[i - 1]
        for j in range(1, m + 1):
            row[j] = min(
                above[j - 1] + (ref_token != hypothesis[j - 1]),
                above[j] + 1,
                row[j - 1] + 1,
            )
        cost.append(row)

    substitutions = insertions = deletions = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            mismatch = reference[i - 1] != hypothesis[j - 1]
            if cost[i][j] == cost[i - 1][j - 1] + mismatch:
                substitutions += int(mismatch)
                i, j = i - 1, j - 1
                continue
        if i > 0 and cost[i][j] == cost[i - 1][j] + 1:
            deletions += 1
            i -= 1
        else:
            insertions += 1
            j -= 1
    return EditCounts(substitutions, insertions, deletions)
