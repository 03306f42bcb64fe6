"""Consensus realignment of a drifted multitext.

Two translation teams shipped bitexts whose English sides drifted apart:
lines were reordered, lightly copyedited, and one entry exists on only one
side.  We pick a consensus English file and realign each team's target file
to it by minimizing total edit distance over an injective line matching.
"""

from paracurate.align import align_references, realign_corpus

consensus_english = [
    "The committee approved the budget on Tuesday.",
    "Rainfall was far below the seasonal average.",
    "The new clinic opened its doors in March.",
    "Students organized a reading club in the village.",
    "The bridge repairs will continue through June.",
]

# Team A's English side: reordered, with small copyedits.
team_a_english = [
    "The new clinic opened doors in March.",             # -> consensus 2
    "The committee approved the budget on Tuesday.",     # -> consensus 0
    "The bridge repairs will continue thru June.",       # -> consensus 4
    "Rainfall was far below the seasonal averages.",     # -> consensus 1
    "Students organised a reading club in the village.", # -> consensus 3
]
team_a_target = [
    "clinique ouverte en mars",
    "budget approuvé mardi",
    "réparations du pont jusqu'en juin",
    "pluies bien en dessous de la moyenne",
    "club de lecture au village",
]

print("== align team A's English side to the consensus ==")
matrix, assignment = align_references(consensus_english, team_a_english)
for i, j in sorted(assignment.mapping.items()):
    print(f"  variant line {i} -> consensus line {j} (cost {matrix[i, j]})")
print(f"total cost: {assignment.total_cost}\n")

reordered, report = realign_corpus(
    consensus_english, team_a_english, team_a_target, precomputed=(matrix, assignment)
)
print("== team A's target file, now in consensus order ==")
for line_no, line in enumerate(reordered):
    print(f"  {line_no}: {line}")

# Team B lost one line entirely; the unmatched consensus position is
# dropped from the output and reported instead of being guessed at.
team_b_english = [
    "Students organized a reading club in the village!",
    "The committee approved the budget on Tuesday.",
    "Rainfall was below the seasonal average.",
    "The new clinic opened its doors in March.",
]
team_b_target = ["klubu karanta", "lajǝli gafe", "sanji dogo", "dɔgɔtɔrɔso kura"]

print("\n== team B is one line short ==")
reordered_b, report_b = realign_corpus(consensus_english, team_b_english, team_b_target)
print(f"matched {report_b.matched_count} of {len(consensus_english)} consensus lines, "
      f"total cost {report_b.total_cost}")
for j, text in report_b.dropped_consensus:
    print(f"  dropped consensus line {j}: {text}")
for line_no, line in enumerate(reordered_b):
    print(f"  {line_no}: {line}")
