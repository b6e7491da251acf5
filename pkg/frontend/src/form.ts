// The answer form: one radio per offered year, a submit button that stays
// disabled until something is selected, and a confirmation step between
// submit and the actual POST.

export interface FormHooks {
  onSelect(year: string): void;
  onSubmit(): void;
  onConfirm(): void;
  onCancel(): void;
}

export interface AnswerForm {
  root: HTMLElement;
  setTrial(question: string, options: string[]): void;
  setSubmitEnabled(enabled: boolean): void;
  showConfirm(year: string): void;
  hideConfirm(): void;
  reset(): void;
}

export function buildAnswerForm(container: HTMLElement, hooks: FormHooks): AnswerForm {
  const doc = container.ownerDocument;
  const root = doc.createElement("div");
  root.className = "answer-form";

  const question = doc.createElement("p");
  question.className = "question";
  const choices = doc.createElement("div");
  choices.className = "choices";
  const submit = doc.createElement("button");
  submit.textContent = "Submit";
  submit.disabled = true;
  submit.addEventListener("click", () => hooks.onSubmit());

  const overlay = doc.createElement("div");
  overlay.className = "confirm-overlay hidden";
  const confirmText = doc.createElement("p");
  const confirmBtn = doc.createElement("button");
  confirmBtn.textContent = "Confirm";
  confirmBtn.addEventListener("click", () => hooks.onConfirm());
  const backBtn = doc.createElement("button");
  backBtn.textContent = "Back";
  backBtn.addEventListener("click", () => hooks.onCancel());
  overlay.append(confirmText, confirmBtn, backBtn);

  root.append(question, choices, submit, overlay);
  container.appendChild(root);

  return {
    root,
    setTrial(q: string, options: string[]): void {
      question.textContent = q;
      choices.textContent = "";
      for (const year of options) {
        const label = doc.createElement("label");
        const radio = doc.createElement("input");
        radio.type = "radio";
        radio.name = "answer";
        radio.value = year;
        radio.addEventListener("change", () => hooks.onSelect(year));
        label.append(radio, doc.createTextNode(year));
        choices.appendChild(label);
      }
      submit.disabled = true;
      overlay.classList.add("hidden");
    },
    setSubmitEnabled(enabled: boolean): void {
      submit.disabled = !enabled;
    },
    showConfirm(year: string): void {
      confirmText.textContent = `Submit '${year}' as your answer?`;
      overlay.classList.remove("hidden");
    },
    hideConfirm(): void {
      overlay.classList.add("hidden");
    },
    reset(): void {
      for (const el of choices.querySelectorAll("input")) {
        (el as HTMLInputElement).checked = false;
      }
      submit.disabled = true;
      overlay.classList.add("hidden");
    },
  };
}
