#!/usr/bin/env python3
import sys

sys.stdin.read()
sys.stderr.write("simulator exploded\n")
sys.exit(3)
