"""Judging pipeline: tokens, refinement, measures, judge, harness and reports."""
