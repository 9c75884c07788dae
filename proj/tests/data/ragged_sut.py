#!/usr/bin/env python3
import sys

lines = sys.stdin.read().split("\n")
times = lines[1].split()
print(" ".join(times))
for j in range(len(times)):
    print(" ".join(["1.0"] * (1 + j % 2)))
