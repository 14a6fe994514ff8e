"""Sample schedules, weights and a scripted walkthrough of a two-party run."""
