"""Lambda-mu with first-class negation: syntax, reduction, typing, bridges."""
