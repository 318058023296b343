import logging

from sascsim.log_config import setup_logging


def test_handlers_are_replaced(tmp_path):
    setup_logging("DEBUG")
    logger = setup_logging("WARNING", tmp_path / "logs" / "run.log")
    assert len(logger.handlers) == 2
    assert logger.level == logging.WARNING


def test_file_handler_writes(tmp_path):
    log_file = tmp_path / "run.log"
    logger = setup_logging("INFO", log_file)
    logging.getLogger("sascsim.simulate").info("planned 3 dialogues")
    for handler in logger.handlers:
        handler.flush()
    assert "planned 3 dialogues" in log_file.read_text(encoding="utf-8")
