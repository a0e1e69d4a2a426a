class InputHandler:
    """
    Asks before searches whose size makes them slow: exact index and criticality searches
    on large hypergraphs, and vector enumeration over many components.

    Attributes:
        no_input (bool): Never prompt; every question gets default_response (--no-input).
        default_response (str): Answer used when no_input is True. 'y' lets searches run.

    Methods:
        get_input(prompt):
            The user's lower-cased answer, or default_response without prompting.
        confirm(prompt):
            True when the answer is 'y' or 'yes'.
        confirm_search(what, size, limit):
            True without asking while size stays within limit; otherwise asks whether to
            run a search over `size` items of kind `what` (vertices, candidate vectors).
    """
    def __init__(self, no_input=False, default_response='y'):
        self.no_input = no_input
        self.default_response = default_response

    def get_input(self, prompt):
        if not self.no_input:
            return input(prompt).lower().strip()
        return self.default_response

    def confirm(self, prompt):
        return self.get_input(f"{prompt} (y/n): ") in ('y', 'yes')

    def confirm_search(self, what, size, limit):
        if size <= limit:
            return True
        return self.confirm(f"Search over {size:,} {what} (more than {limit:,}) may take long. Proceed?")
