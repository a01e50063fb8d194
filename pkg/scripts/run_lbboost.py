import sys

from lbboost.commands import main

# run it as follows:
# python path/to/here/run_lbboost.py synth -options "path/to/options.json"
# python path/to/here/run_lbboost.py train -options "path/to/options.json" --iterations 30 --candidates 50
# python path/to/here/run_lbboost.py detect -options "path/to/options.json"
# python path/to/here/run_lbboost.py roc -options "path/to/options.json" --delta 10 --truncation 2
# python path/to/here/run_lbboost.py detect -options "path/to/options.json" --n-members 10
# python path/to/here/run_lbboost.py compare -options "path/to/compare_options.json"
# flags override the values in the options file; errors exit with status 2

if __name__ == '__main__':
    sys.exit(main())
