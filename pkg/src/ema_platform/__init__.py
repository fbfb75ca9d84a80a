"""Configurable EMA / mobile-crowdsensing backend platform.

Subpackages:

* ``questionnaire`` — versioned questionnaire documents, localization,
  answer-sheet validation
* ``feedback`` — the rule engine turning validated answer sheets into
  ordered feedback blocks
* ``auth`` — accounts, bearer tokens, consent bookkeeping, and the
  privacy transforms (location coarsening, usage aggregation)
* ``store`` — durable content storage, study membership, the expert
  approval workflow, atomic snapshot publishing, answer-sheet persistence
* ``scheduling`` — notification schedule computation
* ``api`` — the JSON:API HTTP service over all of the above
* ``sim`` — the scenario-driven multi-client consistency harness
* ``cli`` — the operator command-line tool
"""

__version__ = "0.1.0"
