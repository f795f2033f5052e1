# This file should disappear one day there are no more *.py files left
# here in the conf/ dir.
