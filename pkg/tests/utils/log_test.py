import logging
import os
import tempfile
import unittest

from lbboost.utils.log import setup_logging

class TestLogging(unittest.TestCase):

    def test_no_duplicate_handlers(self):
        with tempfile.TemporaryDirectory() as tmp:
            log_file = os.path.join(tmp, 'logs', 'run.txt')
            logger = setup_logging(log_file, name = 'LBBOOST_TEST')
            setup_logging(log_file, name = 'LBBOOST_TEST')
            self.assertEqual(sum(type(h) is logging.StreamHandler for h in logger.handlers), 1)
            self.assertEqual(sum(isinstance(h, logging.FileHandler) for h in logger.handlers), 1)

            logger.info('iteration 1: done')
            for h in logger.handlers:
                h.flush()
            with open(log_file) as f:
                self.assertIn('LBBOOST_TEST - iteration 1: done', f.read())

            for h in list(logger.handlers):
                h.close()
                logger.removeHandler(h)

if __name__ == '__main__':
    unittest.main()
