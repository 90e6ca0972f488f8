# the bundled reference corpus is not part of this package's test suite
collect_ignore = ["examples"]
