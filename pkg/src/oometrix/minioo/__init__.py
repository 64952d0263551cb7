"""Lexer, syntax tree and parser for the MiniOO language subset."""
