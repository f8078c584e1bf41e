PERIODS_PER_YEAR = 2
PERIODIC_DOMAIN_EPS = 1e-6

SOLVER_TOL_REQUESTED = 1e-8
SOLVER_TOL_ACCEPTED = 1e-6
SOLVER_MAX_ITER = 200
SOLVER_TIME_LIMIT = 60.0
SOLVER_VERBOSE = False

MEMBERSHIP_TOL = 1e-7
RANK_TOL = 1e-10
BOUNDEDNESS_LIMIT = 1e6

KEY_TENORS_YEARS = (0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 20.0, 30.0)
RATINGS = ('AAA', 'AA', 'A', 'BBB')
HISTORY_NUM_COLUMNS = len(KEY_TENORS_YEARS) + len(RATINGS)

MAX_PERIODS = 60
DEFAULT_FACE_VALUE = 100.0
COUPON_FREQUENCIES = {
    'annual': 1,
    'semiannual': 2,
}

# h is quoted in face-100 units, so a budget of 100 keeps holdings close to value weights
DEFAULT_BUDGET = 100.0

CUTTING_PLANE_MAX_ITERS = 50
CUTTING_PLANE_TOL = 1e-5

SADDLE_SLACK = 1e-6
SADDLE_SAMPLES = 200

DEFAULT_SEED = 42
DEFAULT_ALPHAS = (0.5, 0.99)
DEFAULT_LAMBDAS = (1.0, 5.0, 15.0)
DEFAULT_WORKERS = 1

DATA_DIR = 'data'
OUT_DIR = 'out'
UNIVERSE_FILE = 'universe.csv'
HISTORY_FILE = 'history.csv'
WEIGHTS_FILE = 'weights.csv'
RESULTS_FILE = 'results.txt'

REPORT_DECIMALS = 6
PERCENT_DECIMALS = 2

LOG_LEVEL = 'WARNING'
LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'

VERIFY_INSTANCES = 20
VERIFY_MAX_BONDS = 4
VERIFY_MAX_PERIODS = 8
VERIFY_LAMBDAS = (0.5, 2.0, 10.0)
VERIFY_CONSTRUCTION_INSTANCES = 3
VERIFY_CONSTRUCTION_WIDTH = 0.02
