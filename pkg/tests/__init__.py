# Tests for postlb
