"""Maximum-leaf spanning arborescences in rooted DAGs via local search on {2,3}-intersection graphs."""
